# Pipeline integration tests
