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

# pylint: disable=missing-docstring
# pylint: disable=invalid-name

import math
import unittest

from cvcluster.core.exceptions import ConfigError
from cvcluster.utils import utils
from cvcluster.utils.loggable import Logger
from cvcluster.utils.utils import (OrderedSet, all_subclasses, format_float,
                                   parse_rails)


class TestUtils(unittest.TestCase):
    def setUp(self):
        Logger.reset()
        Logger.silent = True

    def test_parse_rails(self):
        self.assertEqual(parse_rails('1,2,3,100,inf'),
                         [1, 2, 3, 100, math.inf])
        self.assertEqual(parse_rails(4), [4])
        self.assertEqual(parse_rails(['1', 2, 'Infinity']),
                         [1, 2, math.inf])
        self.assertEqual(parse_rails(None), [])

    def test_parse_rails_invalid(self):
        with self.assertRaises(ConfigError):
            parse_rails('1,two')
        with self.assertRaises(ConfigError):
            parse_rails('1.5')

    def test_format_float(self):
        self.assertEqual(format_float(0.1), '0.10000000000000001')
        self.assertEqual(format_float(3), '3')
        self.assertEqual(format_float(True), 'true')
        self.assertEqual(format_float(-math.inf), '-inf')
        self.assertEqual(float(format_float(math.pi)), math.pi)

    def test_all_subclasses(self):
        class Base(object):
            pass

        class Child(Base):
            pass

        class GrandChild(Child):
            pass

        self.assertEqual(all_subclasses(Base), [Child, GrandChild])

    def test_ordered_set(self):
        ordered = OrderedSet([3, 1, 3, 2])
        self.assertEqual(list(ordered), [3, 1, 2])
        ordered.discard(1)
        self.assertEqual(ordered.pop(), 2)
        self.assertEqual(ordered, OrderedSet([3]))

    def test_helpers(self):
        helpers = {name for name, value in vars(utils).items()
                   if callable(value) and not name.startswith('_') and
                   getattr(value, '__module__', None) == utils.__name__}
        self.assertEqual(helpers, {'OrderedSet', 'all_subclasses',
                                   'format_float', 'parse_rails'})


if __name__ == '__main__':
    unittest.main()
