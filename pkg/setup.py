"""Setup.py for evoseries."""

import setuptools

MODULE = 'evoseries'
VERSION = '0.1.0'
KEYWORDS = ['Taylor series', 'Evolution equations', 'Differential-difference equations', 'Exact solutions']
INSTALL_REQUIRES = [
    'numpy>=1.23.0',
    'scipy>=1.10.0',
    'pandas>=1.5.0',
    'tqdm>=4.64.0',
    'sympy>=1.12',
    'mpmath>=1.3.0',
]
TESTS_REQUIRE = [
    'pytest>=7.0',
    'hypothesis>=6.70',
]

if __name__ == '__main__':
    setuptools.setup(
        name=MODULE,
        version=VERSION,
        description='Taylor-in-time series and exact-solution checks for evolution equations',
        license='MIT',
        keywords=KEYWORDS,
        packages=setuptools.find_packages(where='src'),
        package_dir={'': 'src'},
        include_package_data=True,
        install_requires=INSTALL_REQUIRES,
        extras_require={'test': TESTS_REQUIRE},
        entry_points={'console_scripts': ['evoseries=evoseries.cli:run']},
        python_requires='>=3.9',
        zip_safe=False,
    )
