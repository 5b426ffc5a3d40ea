"""
Setup script for hplane package.

Installation:
    pip install -e .  # Development install
    pip install .     # Regular install
"""

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="hplane",
    version="0.1.0",
    author="Vivek Pandian",
    author_email="vivekpandian08@gmail.com",
    description="Exact symbolic engine and verification suites for the h-deformed quantum plane",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/vivekpandian08/hplane",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={"hplane": ["py.typed", "config.json"]},
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    python_requires=">=3.8",
    install_requires=[
        "sympy>=1.9",  # Exact linear algebra for the connection solver and the commutative limit
    ],
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-cov>=4.0.0",
            "black>=23.0.0",
            "ruff>=0.1.0",
        ],
        "test": [
            "pytest>=7.0.0",
            "pytest-cov>=4.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "hplane=hplane.cli:main",
        ],
    },
    keywords="quantum plane noncommutative geometry r-matrix yang-baxter connections curvature",
    project_urls={
        "Bug Reports": "https://github.com/vivekpandian08/hplane/issues",
        "Source": "https://github.com/vivekpandian08/hplane",
        "Documentation": "https://github.com/vivekpandian08/hplane#readme",
    },
)
