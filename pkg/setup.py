from setuptools import setup, find_packages

with open('npuleak/_version.py') as fin: exec(fin.read(), globals())
with open('requirements.txt') as fin: requirements=[s.strip() for s in fin.readlines()]
with open('README.rst') as fin: long_description = fin.read()

packages = find_packages(exclude=["*.tests", "*.tests.*", "tests.*", "tests"])

setup(
    name = "npuleak",
    version = __version__,
    packages = packages,

    #dependencies
    install_requires = requirements,

    #misc files to include
    package_data = {
        "": ["LICENSE"],
        "npuleak.catalog": ["data/*.csv", "data/*.schedule"]
    },

    entry_points = {
        "console_scripts": ["npuleak = npuleak.harness:main"]
    },

    #PyPI MetaData
    author = __author__,
    description = "Memory-bandwidth side channel simulation, attack and defence toolkit for tiled DNN accelerators",
    long_description = long_description,
    long_description_content_type = "text/x-rst",
    license = "BSD 3-Clause",
    keywords = "side channel accelerator npu dnn memory bandwidth",
    classifiers = (
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Natural Language :: English",
        "License :: OSI Approved :: BSD License",
        "Programming Language :: Python"
    ),

    zip_safe = False
)
