from setuptools import find_namespace_packages, setup

setup(
    name="shadowmancer",
    version="0.1.0",
    package_dir={"": "src"},
    packages=find_namespace_packages(where="src", include=["shadowmancer*"]),
    package_data={"shadowmancer": ["config/*.yaml"]},
    description="Classical-shadows simulator and estimator for locally entangled measurement protocols",
    python_requires=">=3.9",
    license="MIT",
    entry_points={"console_scripts": ["shadowmancer=shadowmancer.interface.cli_interface:main"]},
)
