#!/usr/bin/env python3
"""
Setup configuration for bunchkit
"""

from setuptools import setup, find_packages
import os

# Read README for long description
def read_readme():
    readme_path = os.path.join(os.path.dirname(__file__), 'README.md')
    if os.path.exists(readme_path):
        with open(readme_path, 'r', encoding='utf-8') as f:
            return f.read()
    return ""

setup(
    name="bunchkit",
    version="1.0.0",
    author="Your Name",
    author_email="your.email@example.com",
    description="Semantics workbench for the bunched logics: frames, algebras, duality and heaps",
    long_description=read_readme(),
    long_description_content_type="text/markdown",
    url="https://github.com/yourusername/bunchkit",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.9",
    install_requires=[
        "networkx>=2.6",
    ],
    extras_require={
        "test": ["pytest>=7"],
    },
    entry_points={
        "console_scripts": [
            "bunchkit=bunchkit.cli:main",
        ],
    },
    keywords="logic bunched-implications separation-logic kripke-semantics duality",
    project_urls={
        "Bug Reports": "https://github.com/yourusername/bunchkit/issues",
        "Source": "https://github.com/yourusername/bunchkit",
        "Documentation": "https://github.com/yourusername/bunchkit#readme",
    },
)
