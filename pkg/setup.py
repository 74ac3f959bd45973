#!/usr/bin/env python

from setuptools import setup

version = "0.1.0"

REQUIREMENTS = [i.strip() for i in open("requirements.txt").readlines()]

setup(
    name="pymagnomech",
    version=version,
    packages=[
        "pymagnomech",
        "pymagnomech.cmds",
        "pymagnomech.helpers",
        "pymagnomech.oracle",
        "pymagnomech.spectra",
        "pymagnomech.util",
    ],
    entry_points={'console_scripts': [
        'magnosim = pymagnomech.cmds.magnosim:main',
    ]},
    install_requires=REQUIREMENTS,
    license="http://opensource.org/licenses/MIT",
    description="Probe transmission, absorption and group delay of an atom opto-magnomechanical chain."
)
