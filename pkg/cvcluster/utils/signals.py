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
Progress notifications for long computations.

The sweeper emits a signal after every table row and the verification
runner after every suite; the command line and the tests connect to them.
"""

import inspect

from cvcluster.utils.utils import OrderedSet


class Slot:
    """A handler plus the extra arguments it was connected with"""
    # pylint: disable=too-few-public-methods

    def __init__(self, handler, *extra_args):
        self.extra_args = extra_args
        # Bound methods are split so that equal methods of one receiver
        # hash alike.
        if inspect.ismethod(handler):
            self.receiver = handler.__self__
            self.func = handler.__func__
        else:
            self.receiver = None
            self.func = handler

    def __key(self):
        return (self.func, id(self.receiver), self.extra_args)

    def __hash__(self):
        return hash(self.__key())

    def __eq__(self, other):
        return isinstance(other, Slot) and self.__key() == other.__key()

    def __call__(self, *args):
        if self.receiver is not None:
            args = (self.receiver,) + args
        return self.func(*(args + self.extra_args))


class Signal:
    """
    An ordered set of handlers, called in connection order on emission.

    Emitting returns the list of the handlers' return values.
    """

    def __init__(self):
        self._slots = OrderedSet()

    def __len__(self):
        return len(self._slots)

    def __call__(self, *args):
        return [slot(*args) for slot in list(self._slots)]

    def connect(self, handler, *extra_args):
        """
        Call `handler` with the emitted arguments followed by
        `extra_args` on every emission. Connecting twice is a no-op.
        """
        self._slots.add(Slot(handler, *extra_args))

    def disconnect(self, handler, *extra_args):
        """
        Undo a `connect` made with the same arguments.
        """
        self._slots.discard(Slot(handler, *extra_args))
