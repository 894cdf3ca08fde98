# setup.py
from setuptools import setup, find_packages

setup(
    name="covlab",
    version="0.1",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"src.config": ["config.yml"]},
)
