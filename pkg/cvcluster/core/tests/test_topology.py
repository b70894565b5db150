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
import json
import os
import shutil
import unittest

import numpy

from cvcluster.core.topology import (INNER, OUTER, ClusterSpec,
                                     TopologyError, common_neighbors,
                                     linear_chain, load_topology, mid_rails,
                                     nrail, topology_from_name)
from cvcluster.utils.loggable import Logger


class TestTopology(unittest.TestCase):
    def setUp(self):
        Logger.reset()
        Logger.silent = True
        here = os.path.dirname(__file__)
        priv_dir = os.path.join(here, 'test-private-topology')
        self.__priv_dir = os.path.abspath(priv_dir)
        shutil.rmtree(self.__priv_dir, ignore_errors=True)
        os.mkdir(self.__priv_dir)

    def tearDown(self):
        shutil.rmtree(self.__priv_dir, ignore_errors=True)

    def __write(self, name, contents):
        path = os.path.join(self.__priv_dir, name)
        with open(path, 'w') as _:
            _.write(contents)
        return path

    def test_linear_chain(self):
        spec = linear_chain(4)
        self.assertEqual(spec.node_count, 4)
        self.assertEqual(spec.edges, frozenset([(1, 2), (2, 3), (3, 4)]))
        self.assertEqual(list(spec.inputs.items()),
                         [('alpha', 2), ('beta', 3)])
        self.assertEqual(spec.outputs, (1, 4))
        self.assertEqual(spec.name, 'L4')

        outer = linear_chain(4, OUTER)
        self.assertEqual(list(outer.inputs.items()),
                         [('alpha', 1), ('beta', 4)])
        self.assertEqual(outer.outputs, (2, 3))
        self.assertEqual(outer.name, 'L4-outer')
        self.assertNotEqual(spec, outer)

        odd = linear_chain(5, INNER)
        self.assertEqual(odd.inputs, {})
        self.assertEqual(odd.outputs, ())

    def test_invalid_chains(self):
        with self.assertRaises(TopologyError):
            linear_chain(0)
        with self.assertRaises(TopologyError):
            linear_chain(3, OUTER)
        with self.assertRaises(TopologyError):
            linear_chain(4, 'sideways')

    def test_nrail(self):
        spec = nrail(2)
        self.assertEqual(spec.node_count, 8)
        self.assertEqual(spec.outputs, (1, 8))
        self.assertEqual(dict(spec.inputs), {'alpha': 4, 'beta': 5})
        self.assertEqual(spec.neighbors(1), frozenset([2, 3]))
        self.assertEqual(spec.neighbors(4), frozenset([2, 3, 5]))
        self.assertEqual(spec.neighbors(8), frozenset([6, 7]))
        self.assertEqual([list(arm) for arm in mid_rails(2)],
                         [[2, 3], [6, 7]])
        self.assertTrue(spec.is_connected())
        self.assertEqual(len(spec.edges), 4 * 2 + 1)

    def test_nrail_is_chain(self):
        self.assertEqual(nrail(1), linear_chain(6))
        self.assertTrue(nrail(1).isomorphic(linear_chain(6)))
        self.assertFalse(linear_chain(4).isomorphic(linear_chain(4, OUTER)))

    def test_invalid_nrail(self):
        with self.assertRaises(TopologyError):
            nrail(0)
        with self.assertRaises(TopologyError):
            nrail(1.5)

    def test_invalid_specs(self):
        with self.assertRaises(TopologyError):
            ClusterSpec(0, [])
        with self.assertRaises(TopologyError):
            ClusterSpec(3, [(1, 4)])
        with self.assertRaises(TopologyError):
            ClusterSpec(3, [(2, 2)])
        with self.assertRaises(TopologyError):
            ClusterSpec(3, [], outputs=(1,))
        with self.assertRaises(TopologyError):
            ClusterSpec(3, [], inputs={'alpha': 5})
        with self.assertRaises(TopologyError):
            linear_chain(4).neighbors(5)

    def test_edges_normalized(self):
        spec = ClusterSpec(3, [(2, 1), (1, 2), (3, 2)])
        self.assertEqual(spec.edges, frozenset([(1, 2), (2, 3)]))
        self.assertEqual(spec.degree(2), 2)
        self.assertEqual(spec.name, 'cluster-3')

    def test_matrices(self):
        spec = nrail(2)
        adjacency = spec.adjacency_matrix()
        numpy.testing.assert_array_equal(adjacency, adjacency.T)
        self.assertEqual(adjacency.sum(), 2 * len(spec.edges))

        common = spec.common_neighbor_matrix()
        for k in spec.nodes:
            for l in spec.nodes:
                self.assertEqual(common[k - 1, l - 1],
                                 common_neighbors(spec, k, l))
        # The outputs share both mid-rails of their arm with the input
        # attachment point
        self.assertEqual(common_neighbors(spec, 1, 4), 2)
        self.assertEqual(common_neighbors(spec, 1, 1), 2)

    def test_dict_round(self):
        spec = nrail(3)
        document = spec.to_dict()
        self.assertEqual(document['nodes'], 10)
        self.assertEqual(document['outputs'], [1, 10])
        other = ClusterSpec.from_dict(json.loads(json.dumps(document)))
        self.assertEqual(other, spec)
        self.assertEqual(list(other.inputs), ['alpha', 'beta'])

    def test_invalid_document(self):
        with self.assertRaises(TopologyError):
            ClusterSpec.from_dict({'nodes': 2})
        with self.assertRaises(TopologyError):
            ClusterSpec.from_dict({'nodes': 2, 'edges': [[1, 2, 3]]})
        with self.assertRaises(TopologyError):
            ClusterSpec.from_dict({'nodes': 'two', 'edges': []})

    def test_load(self):
        path = self.__write('square.yaml',
                            'nodes: 4\n'
                            'edges: [[1, 2], [2, 3], [3, 4], [4, 1]]\n'
                            'inputs: {beta: 3, alpha: 2}\n'
                            'outputs: [1, 4]\n'
                            'name: square\n')
        spec = load_topology(path)
        self.assertEqual(spec.name, 'square')
        self.assertEqual(list(spec.inputs.items()),
                         [('alpha', 2), ('beta', 3)])
        self.assertEqual(spec.degree(1), 2)

        self.assertEqual(topology_from_name(path), spec)

        path = self.__write('broken.json', '{"nodes": ')
        with self.assertRaises(TopologyError):
            load_topology(path)

    def test_from_name(self):
        self.assertEqual(topology_from_name('L4'), linear_chain(4))
        self.assertEqual(topology_from_name('L6-outer'),
                         linear_chain(6, OUTER))
        self.assertEqual(topology_from_name('3R'), nrail(3))
        with self.assertRaises(TopologyError):
            topology_from_name('ring')


if __name__ == '__main__':
    unittest.main()
