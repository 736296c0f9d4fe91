from setuptools import find_packages, setup


with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="finegrain",
    version="0.1.0",
    description="Fine-granularity aware robust training on report-labeled data",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["main"],
    install_requires=[
        "pydantic~=2.10.4",
        "loguru~=0.7.3",
        "numpy",
    ],
    extras_require={"test": ["pytest~=8.3"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.12",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.12",
    entry_points={
        "console_scripts": [
            "finegrain=main:main",
        ],
    },
)
