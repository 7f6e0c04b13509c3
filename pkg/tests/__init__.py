"""
Test Suite for the HSLR SDP Solver

Unit tests per subpackage plus end-to-end solver and command-line runs.
"""
