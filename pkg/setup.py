# -*- coding: utf-8 -*-
#
# Copyright © 2024 The cvcluster developers
#
# This library is free software; you can redistribute it and/or modify it under
# the terms of the GNU Lesser General Public License as published by the Free
# Software Foundation; either version 2.1 of the License, or (at your option)
# any later version.
#
# This library is distributed in the hope that it will be useful, but WITHOUT
# ANY WARRANTY; without even the implied warranty of MERCHANTABILITY or FITNESS
# FOR A PARTICULAR PURPOSE.  See the GNU Lesser General Public License for more
# details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with this library.  If not, see <http://www.gnu.org/licenses/>.

"""
Setup file for cvcluster.
"""

import os
import unittest

from setuptools import find_packages, setup
from setuptools.command.test import test

from cvcluster.utils.setup_utils import VERSION

SOURCE_DIR = os.path.abspath(os.path.dirname(__file__))

# pylint: disable=invalid-name
# pylint: disable=missing-docstring


# From http://stackoverflow.com/a/17004263/2931197
def discover_and_run_tests(forever):
    # use the default shared TestLoader instance
    test_loader = unittest.defaultTestLoader

    # use the basic test runner that outputs to sys.stderr
    test_runner = unittest.TextTestRunner()

    # automatically discover all tests
    test_suite = test_loader.discover(SOURCE_DIR)

    loop = True
    while loop:
        res = test_runner.run(test_suite)
        if res.errors or res.failures or not forever:
            loop = False


class DiscoverTest(test):
    user_options = test.user_options + [('forever', None, 'Run until failure')]

    def __init__(self, *args, **kwargs):
        test.__init__(self, *args, **kwargs)
        self.test_args = []
        self.test_suite = True
        self.forever = False

    def initialize_options(self):
        test.initialize_options(self)
        self.forever = False

    def finalize_options(self):
        test.finalize_options(self)
        self.test_args = []
        self.test_suite = True

    def run_tests(self):
        discover_and_run_tests(self.forever)


INSTALL_REQUIRES = [
    'numpy>=1.22',
    'scipy>=1.8',
    'networkx>=2.5',
    'pyyaml>=6',
    'schema',
    'toposort>=1.4',
]

EXTRAS_REQUIRE = {
    'dev': ['hypothesis>=6',
            'git-pylint-commit-hook',
            'git-pep8-commit-hook'],
}

PACKAGE_DATA = {
    'cvcluster': ['VERSION.txt'],
}


setup(
    name='cvcluster',
    version=VERSION,
    description='Gate teleportation on continuous-variable cluster states',
    keywords='quantum optics cluster states entanglement',
    license='LGPLv2.1+',
    packages=find_packages(),
    cmdclass={'test': DiscoverTest},
    package_data=PACKAGE_DATA,
    install_requires=INSTALL_REQUIRES,
    extras_require=EXTRAS_REQUIRE,
    tests_require=['hypothesis>=6'],
    entry_points={
        'console_scripts': [
            'cvcluster=cvcluster.run_cvcluster:main']},
    classifiers=[
        "Programming Language :: Python :: 3"])
