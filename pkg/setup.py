import setuptools

setuptools.setup(
    name="qcrypt",
    version="0.1",
    description="Check closed-form quantum cryptography results against numerical optimisation.",
    install_requires=[
        "numpy",
        "pyyaml",
        "scipy",
    ],
    packages=setuptools.find_packages(
        exclude=['tests']
    ),
    entry_points={
        'console_scripts': [
            'qcrypt = qcrypt.__main__:main'
        ],
    }
)
