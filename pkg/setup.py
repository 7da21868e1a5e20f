from setuptools import setup

# This file is kept minimal as the main configuration is in pyproject.toml
setup() 