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
Toolbox
"""

import math
from collections.abc import MutableSet

from cvcluster.core.exceptions import ConfigError
from cvcluster.utils.loggable import Logger, error


Logger.register_error_code('invalid-number-list', ConfigError)


def all_subclasses(cls):
    """
    All direct and indirect subclasses of `cls`, depth first.
    """
    return cls.__subclasses__() + [g for s in cls.__subclasses__()
                                   for g in all_subclasses(s)]


def parse_rails(value):
    """
    Parse a rail-count specification.

    Accepts an int, a list of ints or strings, or a comma separated
    string in which `inf` (or `infinity`) stands for the N -> infinity
    limit, e.g. `1,2,3,100,inf`.

    Returns:
        list: ints and `math.inf`, in the given order.
    """
    if value is None:
        return []

    if isinstance(value, (int, float)):
        items = [value]
    elif isinstance(value, str):
        items = [item for item in value.split(',') if item.strip()]
    else:
        items = []
        for elem in value:
            items.extend(parse_rails(elem))
        return items

    rails = []
    for item in items:
        if isinstance(item, str):
            item = item.strip().lower()
            if item in ('inf', 'infinity'):
                rails.append(math.inf)
                continue
        try:
            number = float(item)
        except ValueError:
            error('invalid-number-list',
                  'Invalid rail count %r in %r' % (item, value))
        if math.isinf(number):
            rails.append(math.inf)
        elif number != int(number):
            error('invalid-number-list',
                  'Rail counts must be integers, got %r' % item)
        else:
            rails.append(int(number))
    return rails


def format_float(value):
    """
    Render a float with 17 significant digits, the format every table
    written by cvcluster uses.
    """
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return '%d' % value
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return '%.17g' % value


# Recipe from http://code.activestate.com/recipes/576694/


class OrderedSet(MutableSet):
    """
    A set that remembers insertion order.
    """

    def __init__(self, iterable=None):
        self.end = end = []
        end += [None, end, end]         # sentinel node for doubly linked list
        self.map = {}                   # key --> [key, prev, next]
        if iterable is not None:
            self |= iterable

    def __len__(self):
        return len(self.map)

    def __contains__(self, key):
        return key in self.map

    # pylint: disable=arguments-differ
    def add(self, key):
        if key not in self.map:
            end = self.end
            curr = end[1]
            curr[2] = end[1] = self.map[key] = [key, curr, end]

    # pylint: disable=arguments-differ
    def discard(self, key):
        if key in self.map:
            key, prev, nxt = self.map.pop(key)
            prev[2] = nxt
            nxt[1] = prev

    def __iter__(self):
        end = self.end
        curr = end[2]
        while curr is not end:
            yield curr[0]
            curr = curr[2]

    def __reversed__(self):
        end = self.end
        curr = end[1]
        while curr is not end:
            yield curr[0]
            curr = curr[1]

    # pylint: disable=arguments-differ
    def pop(self, last=True):
        if not self:
            raise KeyError('set is empty')
        key = self.end[1][0] if last else self.end[2][0]
        self.discard(key)
        return key

    def __repr__(self):
        if not self:
            return '%s()' % (self.__class__.__name__,)
        return '%s(%r)' % (self.__class__.__name__, list(self))

    def __eq__(self, other):
        if isinstance(other, OrderedSet):
            return len(self) == len(other) and list(self) == list(other)
        return set(self) == set(other)
