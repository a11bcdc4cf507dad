import os
import re
import subprocess

import setuptools

ftscluster_version = (
    subprocess.run(["git", "describe", "--tags"], stdout=subprocess.PIPE)
    .stdout.decode("utf-8")
    .strip()
)

try:
    ftscluster_version = re.match("^[^-]*", ftscluster_version).group(0)
except AttributeError:
    print("No version found")

assert os.path.isfile("python_ftscluster/version.py")
if ftscluster_version != "":
    with open("python_ftscluster/VERSION", "w", encoding="utf-8") as fh:
        fh.write(f"{ftscluster_version}\n")
else:
    with open("python_ftscluster/VERSION", "r", encoding="utf-8") as fh:
        ftscluster_version = fh.read().strip()

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="python-ftscluster",
    version=ftscluster_version,
    author="python-ftscluster developers",
    description="Spectral clustering of locally stationary functional time series",
    license="MIT",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests"]),
    package_data={"python_ftscluster": ["VERSION"]},
    include_package_data=True,
    entry_points={
        "console_scripts": [
            "ftscluster=python_ftscluster.cli:main",
            "conf-python-ftscluster=python_ftscluster.setconfig:main",
        ]
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
        # 4 - Beta
        # 5 - Production/Stable
        "Development Status :: 4 - Beta",
    ],
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "scikit-learn>=1.1",
        "pandas>=1.5",
    ],
)
