# Unit tests - pure functions with no I/O or mocking
