from setuptools import setup, find_packages

setup(
    name="indeftheta",
    version="0.1.0",
    packages=find_packages(exclude=['examples', 'examples.*']),
    python_requires='>=3.12',
    install_requires=[
        'Django>=6.0',
        'django-environ',
        'djangorestframework',
        'numpy',
        'scipy',
        'sympy',
    ],
    extras_require={
        'test': ['pytest', 'pytest-django'],
    },
)
