#!/usr/bin/env python
import os
import sys

import pytest


def run_tests(*test_args):
    if not test_args:
        test_args = ["tests"]

    os.environ["DJANGO_SETTINGS_MODULE"] = "tests.settings"
    sys.exit(pytest.main(list(test_args)))


if __name__ == "__main__":
    run_tests(*sys.argv[1:])
