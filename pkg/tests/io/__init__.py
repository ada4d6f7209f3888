# I/O tests - file operations using tmp_path
