"""
forum_innovators Package Setup
"""

from setuptools import setup, find_namespace_packages


setup(
    name="forum-innovators",
    version="0.1.0",
    description=(
        "Profile innovators in forum corpora with network, language and text mining"
        " metrics"
    ),
    url="https://github.com/forum-innovators/forum-innovators",
    author="Forum Innovators Developers",
    license="MIT",
    classifiers=[
        "Programming Language :: Python :: 3.10",
    ],
    python_requires=">= 3.10",
    install_requires=[
        "matplotlib~=3.6",
        "networkx>=2.8",
        "nltk~=3.7",
        "numpy>=1.23",
        "pandas>=1.5",
        "pyyaml~=6.0",
        "scikit-learn>=1.1",
        "scipy>=1.9",
        "voluptuous~=0.13",
    ],
    packages=find_namespace_packages(include=["forum_innovators*"]),
    package_data={
        "forum_innovators.data": [
            "stopwords_it.txt",
            "lemmas_it.tsv",
            "polarity_it.tsv",
        ]
    },
    entry_points={"console_scripts": ["forum-innovators = forum_innovators.cli:main"]},
    tests_require=["pytest~=7.1"],
)
