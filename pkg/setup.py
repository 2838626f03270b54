from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name                          = "ncavity",
    version                       = "0.1.0",
    author                        = "ncavity developers",
    description                   = "Lid-driven cavity Navier-Stokes solver with the cheapest stable nonconforming quadrilateral element pair.",
    long_description              = long_description,
    long_description_content_type = 'text/markdown',
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    packages                      = find_packages(exclude=["tests", "tests.*"]),
    python_requires               = ">=3.8",
    install_requires=[
          'numpy',
          'scipy',
          'rich',
          'pathos',
          'orjson',
          'pandas',
          'python-dotenv'
    ],
    entry_points={
        "console_scripts": [
            "ncavity-bench = ncavity.Benchmark:Benchmark.main",
        ],
    },
)
