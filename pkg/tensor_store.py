"""
Tensor store module
Reads and writes tensors, transforms and solution families as JSON files,
and holds the worked-example tensors used as fixtures.

File layout:
    {"kind": "tensor", "shape": [n1, n2, n3], "data": data}
where data[k][j][i] = [re, im] is entry (i, j) of frontal slice k.
A transform is stored with kind "transform" and shape [n, n, 1].
"""

import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from services.errors import TensorFileError, TensorFileParseError, TensorFileSchemaError
from services.solver_service import SolutionFamily
from services.tensor_service import DenseTensor3, TransformSpec, inverse_transform

logger = logging.getLogger(__name__)

# Default output directory of write_fixtures
FIXTURE_DIR = "fixtures"

KIND_TENSOR = "tensor"
KIND_TRANSFORM = "transform"
KIND_FAMILY = "family"

PathLike = Union[str, Path]


def _reject_constant(name: str):
    raise TensorFileSchemaError(f"Non-finite value {name} is not allowed in tensor files.")


def _read_json(path: PathLike) -> Dict:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise TensorFileError(f"Cannot read {path}: {exc.strerror}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise TensorFileParseError(f"{path} is not UTF-8: {exc.reason}", exc.start) from exc
    try:
        document = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        # Offsets are reported in bytes of the file
        offset = len(text[:exc.pos].encode("utf-8"))
        raise TensorFileParseError(f"Malformed JSON in {path}: {exc.msg}", offset) from exc
    if not isinstance(document, dict):
        raise TensorFileSchemaError(f"{path}: top level must be a JSON object.")
    return document


def _write_json(document: Dict, path: PathLike) -> None:
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    try:
        target.write_text(json.dumps(document, allow_nan=False) + "\n", encoding="utf-8")
    except OSError as exc:
        raise TensorFileError(f"Cannot write {path}: {exc.strerror}") from exc


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def tensor_to_document(a: DenseTensor3, kind: str = KIND_TENSOR) -> Dict:
    if not np.all(np.isfinite(a.data)):
        raise TensorFileSchemaError("Cannot store a tensor with non-finite entries.")
    by_slice = np.transpose(a.data, (2, 1, 0))
    pairs = np.stack([by_slice.real, by_slice.imag], axis=-1)
    return {"kind": kind, "shape": list(a.shape), "data": pairs.tolist()}


def tensor_from_document(document: Dict, expected_kind: str = KIND_TENSOR) -> DenseTensor3:
    """
    Validate a decoded tensor object and build the tensor.

    Raises:
        TensorFileSchemaError: wrong kind, bad shape, or data that does not
            match the shape entry for entry.
    """
    kind = document.get("kind", KIND_TENSOR)
    if kind != expected_kind:
        raise TensorFileSchemaError(f"Expected kind '{expected_kind}', found '{kind}'.")
    shape = document.get("shape")
    if (not isinstance(shape, list) or len(shape) != 3
            or not all(isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in shape)):
        raise TensorFileSchemaError(f"Shape must be three positive integers, found {shape!r}.")
    n1, n2, n3 = shape
    data = document.get("data")
    if not isinstance(data, list) or len(data) != n3:
        raise TensorFileSchemaError(f"Data must hold {n3} frontal slices.")
    for k, columns in enumerate(data):
        if not isinstance(columns, list) or len(columns) != n2:
            raise TensorFileSchemaError(f"Slice {k} must hold {n2} columns.")
        for j, column in enumerate(columns):
            if not isinstance(column, list) or len(column) != n1:
                raise TensorFileSchemaError(f"Slice {k}, column {j} must hold {n1} entries.")
            for i, entry in enumerate(column):
                if not (isinstance(entry, list) and len(entry) == 2 and all(_is_number(x) for x in entry)):
                    raise TensorFileSchemaError(f"Entry ({i}, {j}) of slice {k} must be a [re, im] pair.")
                if not all(math.isfinite(x) for x in entry):
                    raise TensorFileSchemaError(f"Entry ({i}, {j}) of slice {k} is not finite.")
    pairs = np.array(data, dtype=np.float64)
    # Assigned part by part so signed zeros survive
    values = np.empty(pairs.shape[:-1], dtype=np.complex128)
    values.real = pairs[..., 0]
    values.imag = pairs[..., 1]
    return DenseTensor3(np.transpose(values, (2, 1, 0)))


def load_tensor(path: PathLike) -> DenseTensor3:
    """Load a tensor file."""
    return tensor_from_document(_read_json(path))


def save_tensor(a: DenseTensor3, path: PathLike) -> None:
    """Save a tensor; load_tensor reads it back bit for bit."""
    _write_json(tensor_to_document(a), path)
    logger.debug("Saved tensor of shape %s to %s", a.shape, path)


def load_transform(path: PathLike) -> TransformSpec:
    """Load a transform file (an n x n x 1 matrix) and factor it."""
    matrix = tensor_from_document(_read_json(path), expected_kind=KIND_TRANSFORM)
    if matrix.n3 != 1 or matrix.n1 != matrix.n2:
        raise TensorFileSchemaError(f"A transform must have shape [n, n, 1], found {list(matrix.shape)}.")
    return TransformSpec.from_matrix(matrix.data[:, :, 0])


def save_transform(t: TransformSpec, path: PathLike) -> None:
    _write_json(tensor_to_document(DenseTensor3(t.m[:, :, np.newaxis]), kind=KIND_TRANSFORM), path)


def load_family(path: PathLike) -> SolutionFamily:
    document = _read_json(path)
    if document.get("kind") != KIND_FAMILY:
        raise TensorFileSchemaError(f"Expected kind '{KIND_FAMILY}', found '{document.get('kind')}'.")
    for key in ("system", "side", "particular", "projector"):
        if key not in document:
            raise TensorFileSchemaError(f"Family file is missing '{key}'.")
    for key in ("particular", "projector"):
        if not isinstance(document[key], dict):
            raise TensorFileSchemaError(f"'{key}' must be a tensor object.")
    return SolutionFamily(
        particular=tensor_from_document(document["particular"]),
        projector=tensor_from_document(document["projector"]),
        side=document["side"],
        system=document["system"],
    )


def save_family(family: SolutionFamily, path: PathLike) -> None:
    _write_json({
        "kind": KIND_FAMILY,
        "system": family.system,
        "side": family.side,
        "particular": tensor_to_document(family.particular),
        "projector": tensor_to_document(family.projector),
    }, path)


def _from_transform_domain(slices: List, t: TransformSpec) -> DenseTensor3:
    return inverse_transform(DenseTensor3.from_slices(slices), t)


def example_fixtures() -> Dict[str, Union[DenseTensor3, TransformSpec]]:
    """
    The worked-example tensors keyed by fixture name.

    Inverses printed in the transform domain are converted to the original
    domain with the example transform.
    """
    t = TransformSpec.example()
    return {
        "example_M": t,
        "one_mp_A": DenseTensor3.from_slices([
            [[1, -2], [0, -6], [0, 0]],
            [[1, 2], [2, 4], [0, 0]],
            [[0, 3], [0, 6], [0, 0]],
        ]),
        "one_d_A": DenseTensor3.from_slices([
            [[0, 1, 1], [0, -1, 0], [1, -1, 1]],
            [[1, 0, 1], [0, 0, 0], [1, 0, 0]],
            [[0, 0, 0], [0, 1, 0], [-1, 1, 0]],
        ]),
        "one_d_Aminus": DenseTensor3.from_slices([
            [[1, 1, 1], [2, 1, -1], [0, 2, 1]],
            [[0, 1, 1], [1, 1, 1], [1, 1, -1]],
            [[0, 0, 0], [-1, -1, 0], [0, -2, 0]],
        ]),
        "one_star_A": DenseTensor3.from_slices([
            [[2, 0, 0], [0, 2, 1]],
            [[1, 0, 1], [1, 1, 1]],
            [[-1, 0, 0], [0, -1, -1]],
        ]),
        "one_star_Aminus": _from_transform_domain([
            [[1, 0], [0, 1], [0, 0]],
            [[0, 0], [1, 1], [4, 5]],
            [[0, 1], [0, 0], [1, 0]],
        ], t),
        "star_system_A": DenseTensor3.from_slices([
            [[0, 0, 1], [1, -1, 1]],
            [[1, 0, 0], [0, 0, 1]],
            [[0, 0, 0], [0, 1, -1]],
        ]),
        "star_system_B": DenseTensor3.from_slices([
            [[0], [2]],
            [[0], [1]],
            [[1], [-1]],
        ]),
        # Third row of the middle slice is [0, 1]; [1, 0] is not a {1}-inverse.
        "star_system_Aminus": _from_transform_domain([
            [[0, 1], [0, 0], [1, 0]],
            [[1, 0], [0, 0], [0, 1]],
            [[1, 0], [0, 1], [0, 0]],
        ], t),
    }


def write_fixtures(directory: Optional[PathLike] = None) -> List[Path]:
    """Write every fixture as <name>.json into directory (FIXTURE_DIR by default)."""
    target = Path(FIXTURE_DIR if directory is None else directory)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name, value in example_fixtures().items():
        path = target / f"{name}.json"
        if isinstance(value, TransformSpec):
            save_transform(value, path)
        else:
            save_tensor(value, path)
        written.append(path)
    logger.info("Wrote %d fixtures to %s", len(written), target)
    return written
