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

import unittest

from cvcluster.utils.signals import Signal


class Receiver(object):
    def __init__(self):
        self.calls = []

    def handler(self, *args):
        self.calls.append(args)
        return 'handled'


class TestSignals(unittest.TestCase):
    def test_emission(self):
        received = []
        signal = Signal()
        signal.connect(lambda *args: received.append(args))
        signal(1, 2)
        self.assertEqual(received, [(1, 2)])

    def test_extra_args(self):
        received = []

        def handler(*args):
            received.append(args)

        signal = Signal()
        signal.connect(handler, 'extra')
        signal('arg')
        self.assertEqual(received, [('arg', 'extra')])

    def test_method_slot(self):
        receiver = Receiver()
        signal = Signal()
        signal.connect(receiver.handler)
        self.assertEqual(signal(3), ['handled'])
        self.assertEqual(receiver.calls, [(3,)])

    def test_connection_order(self):
        order = []
        signal = Signal()
        signal.connect(order.append, 'first')
        signal.connect(order.append, 'second')
        signal.connect(order.append, 'first')
        self.assertEqual(len(signal), 2)
        signal()
        self.assertEqual(order, ['first', 'second'])

    def test_disconnect(self):
        receiver = Receiver()
        signal = Signal()
        signal.connect(receiver.handler)
        signal.connect(receiver.handler, 'late')
        self.assertEqual(len(signal), 2)
        signal.disconnect(receiver.handler)
        signal.disconnect(receiver.handler, 'late')
        self.assertEqual(len(signal), 0)
        signal()
        self.assertEqual(receiver.calls, [])

    def test_receivers_are_distinct(self):
        first, second = Receiver(), Receiver()
        signal = Signal()
        signal.connect(first.handler)
        signal.connect(second.handler)
        self.assertEqual(signal(7), ['handled', 'handled'])
        self.assertEqual(first.calls, [(7,)])
        self.assertEqual(second.calls, [(7,)])


if __name__ == '__main__':
    unittest.main()
