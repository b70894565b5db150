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
Published geometric-constraint solutions and network unitaries, used as
regression fixtures by the tests and the verification suites.
"""

import math
from collections import OrderedDict

import numpy


G_L4 = numpy.array([[3, 0, -1, 0],
                    [0, 2, 0, -1],
                    [-1, 0, 2, 0],
                    [0, -1, 0, 3]]) / 5.0

G_L6 = numpy.array([[8, 0, -3, 0, 1, 0],
                    [0, 5, 0, -2, 0, 1],
                    [-3, 0, 6, 0, -2, 0],
                    [0, -2, 0, 6, 0, -3],
                    [1, 0, -2, 0, 5, 0],
                    [0, 1, 0, -3, 0, 8]]) / 13.0

G_2R = numpy.array([[18, 0, 0, -10, 0, 2, 2, 0],
                    [0, 21, -13, 0, -3, 0, 0, 2],
                    [0, -13, 21, 0, -3, 0, 0, 2],
                    [-10, 0, 0, 15, 0, -3, -3, 0],
                    [0, -3, -3, 0, 15, 0, 0, -10],
                    [2, 0, 0, -3, 0, 21, -13, 0],
                    [2, 0, 0, -3, 0, -13, 21, 0],
                    [0, 2, 2, 0, -10, 0, 0, 18]]) / 34.0

G_3R = numpy.array([[32, 0, 0, 0, -21, 0, 3, 3, 3, 0],
                    [0, 47, -18, -18, 0, -4, 0, 0, 0, 3],
                    [0, -18, 47, -18, 0, -4, 0, 0, 0, 3],
                    [0, -18, -18, 47, 0, -4, 0, 0, 0, 3],
                    [-21, 0, 0, 0, 28, 0, -4, -4, -4, 0],
                    [0, -4, -4, -4, 0, 28, 0, 0, 0, -21],
                    [3, 0, 0, 0, -4, 0, 47, -18, -18, 0],
                    [3, 0, 0, 0, -4, 0, -18, 47, -18, 0],
                    [3, 0, 0, 0, -4, 0, -18, -18, 47, 0],
                    [0, 3, 3, 3, 0, -21, 0, 0, 0, 32]]) / 65.0

_S2 = 1 / math.sqrt(2)
_S10 = 1 / math.sqrt(10)

U_L4 = numpy.array([[_S2, 2j * _S10, -_S10, 0],
                    [1j * _S2, 2 * _S10, 1j * _S10, 0],
                    [0, 1j * _S10, 2 * _S10, 1j * _S2],
                    [0, -_S10, 2j * _S10, _S2]])

ALPHA_L4 = numpy.array([[_S2, 0, -_S10, 0],
                        [0, math.sqrt(2 / 5), 0, 0],
                        [0, 0, math.sqrt(2 / 5), 0],
                        [0, -_S10, 0, _S2]])

G_FIXTURES = OrderedDict([('L4', G_L4),
                          ('L6', G_L6),
                          ('2R', G_2R),
                          ('3R', G_3R)])

# Table of the half-ideal squeezing thresholds, rounded to two decimals.
RBAR_TABLE = OrderedDict([
    ('canonical', OrderedDict([(1, 0.91), (2, 0.76), (3, 0.70),
                               (100, 0.53), (math.inf, 0.52)])),
    ('lo', OrderedDict([(1, 1.12), (2, 1.03), (3, 1.00),
                        (100, 0.93), (math.inf, 0.93)])),
])

RBAR_TOLERANCE = 0.005
