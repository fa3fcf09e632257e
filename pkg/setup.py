#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Setup script for the KL Mutual Information Toolkit
"""

from setuptools import setup

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line.strip() for line in fh if line.strip() and not line.startswith("#")]

DEV_TOOLS = ("pytest", "pytest-cov", "flake8", "black")

setup(
    name="klmi",
    version="1.0.0",
    author="Information Estimation Group",
    description="Unbiased nearest-neighbour mutual information between discrete labels and metric-space data",
    long_description=long_description,
    long_description_content_type="text/markdown",
    package_dir={"": "src"},
    packages=["algorithms", "utils"],
    py_modules=["cli", "dataset", "estimator", "exceptions", "synthesis"],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Information Analysis",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.8",
    install_requires=[r for r in requirements if not r.startswith(DEV_TOOLS)],
    extras_require={
        "dev": [r for r in requirements if r.startswith(DEV_TOOLS)],
    },
    entry_points={
        "console_scripts": [
            "klmi=cli:main",
        ],
    },
    keywords="mutual information, nearest neighbour, Kozachenko-Leonenko, hypergeometric, bias correction",
)
