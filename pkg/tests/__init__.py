# Tests package for the tensor generalized-inverse toolkit
