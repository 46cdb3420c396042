from setuptools import setup, find_packages

setup(
    name='GraphCx',
    version='0.1',
    packages=find_packages(exclude=['tests', 'examples', 'examples.*']),
    install_requires=['networkx', 'sympy', 'tqdm'],
    extras_require={'test': ['pytest', 'hypothesis']},
    entry_points={'console_scripts': ['graphcx=graphcx.cli:main']},
    scripts=['scripts/graphcx-script.py'],
    license='CC BY 4.0',
    description='Python package for the surgery maps on the graph complex and their strong homotopy identities',
    long_description = open("README.md").read(),
    long_description_content_type = "text/markdown",
)
