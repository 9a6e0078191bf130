# This makes the apps directory a Python package
