"""npuleak tests

Python tests library for npuleak.
"""