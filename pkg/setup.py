from setuptools import setup, find_packages

requirements = [
    "numpy>=1.17",
    "requests",
    "jsonschema>=3.0"
]

requirements_dev = [
    "pep8",
    "pytest",
    "hypothesis"
]

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(
    name="IndirectLearner",
    version="1.0.0",
    description="Learn over samplable distributions through uniform "
                "learners and distributional inverters",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.8",
    install_requires=requirements,
    extras_require={
        "dev": requirements_dev
    },
    entry_points={
        "console_scripts": [
            "indirectlearn=indirectlearner.cli:main",
        ],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
    ],
)
