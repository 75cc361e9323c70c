from setuptools import find_packages, setup

setup(
    name='invex-topo',
    packages=find_packages(exclude=['tests']),
    package_data={'src': ['report_schema.json']},
    version='0.1.0',
    description='Landscape topology, minimax and game analyses of '
                'explicit smooth fields.',
    python_requires='>=3.10',
    install_requires=[
        'click', 'jsonschema', 'lark', 'numpy', 'pandas', 'pydantic>=2',
        'python-json-logger>=3', 'PyYAML', 'scipy', 'tqdm',
    ],
    entry_points={'console_scripts': ['invex-topo = src.cli:cli']},
    license='',
)
