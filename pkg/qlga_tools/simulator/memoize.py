#    Licensed under the Apache License, Version 2.0 (the "License"); you may
#    not use this file except in compliance with the License. You may obtain
#    a copy of the License at
#
#         http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
#    WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
#    License for the specific language governing permissions and limitations
#    under the License.

"""Caching of drivers and of eigen-decompositions."""

import collections
from collections import abc
import contextlib
from functools import wraps
import hashlib
import os
import pickle
import sqlite3
import tempfile

import numpy as np
import tenacity


def memoize(permanent_cache=None):
    """Cache the return value of the decorated method.

    :param permanent_cache: a `dict` like object to use as a cache.
        If not given, the `._cache` attribute would be added to
        the object of the decorated method pointing to a newly
        created `dict`.
    :return: decorated function
    """

    def decorator(method):

        @wraps(method)
        def wrapped(self, *args, **kwargs):
            if permanent_cache is None:
                try:
                    cache = self._cache

                except AttributeError:
                    cache = self._cache = {}

            else:
                cache = permanent_cache

            method_cache = cache.setdefault(method.__name__, {})

            key = args, frozenset(kwargs.items())

            try:
                return method_cache[key]

            except KeyError:
                rv = method(self, *args, **kwargs)
                method_cache[key] = rv
                return rv

        return wrapped

    return decorator


SpectrumKey = collections.namedtuple(
    'SpectrumKey', ['topology', 'size', 'theta', 'fields_digest'])
Tolerances = collections.namedtuple(
    'Tolerances', ['unitarity', 'residual', 'degeneracy'])


def topology_label(topology):
    """Text form of a topology, boundary phases included"""
    return '%s:%r:%r' % (topology.kind, float(topology.zeta_left),
                         float(topology.zeta_right))


def fields_digest(fields):
    """sha256 over the scalar potential bytes followed by the vector ones"""
    digest = hashlib.sha256()
    for values in (fields.phi, fields.A):
        digest.update(np.ascontiguousarray(values, dtype=float).tobytes())
    return digest.hexdigest()


def spectrum_key(U):
    """Identity of an evolution operator for spectrum caching"""
    return SpectrumKey(topology_label(U.lattice.topology), U.lattice.size,
                       float(U.theta), fields_digest(U.fields))


# sqlite raises OperationalError while another process holds the lock
_retry = tenacity.retry(
    retry=tenacity.retry_if_exception_type(sqlite3.OperationalError),
    wait=tenacity.wait_exponential(min=0.1, max=2, multiplier=1),
    stop=tenacity.stop_after_delay(5),
    reraise=True)


class SpectrumStore(abc.MutableMapping):
    """Spectra kept in a sqlite file, keyed by `SpectrumKey`.

    Every row carries the eigensolver tolerances it was computed under.
    Rows from other tolerances are invisible to lookups and get dropped
    when the store is attached to its file.
    """

    DBPATH = os.path.join(tempfile.gettempdir(), 'qlga-tools')

    _dbpath = None

    def __init__(self, tolerances):
        self.tolerances = Tolerances(*(float(t) for t in tolerances))
        self._tag = ','.join(repr(t) for t in self.tolerances)

    @_retry
    def make_permanent(self, dbpath, dbfile):
        """Attach the store to `<dbpath>/<dbfile>.sqlite`.

        :returns: number of rows dropped for stale tolerances
        """
        dbpath = dbpath or self.DBPATH
        os.makedirs(dbpath, exist_ok=True)

        self._dbpath = os.path.join(dbpath, dbfile) + '.sqlite'

        with self.connection() as cursor:
            cursor.execute(
                'create table if not exists spectra ('
                'topology text not null, size integer not null, '
                'theta real not null, fields_digest text not null, '
                'tolerances text not null, value blob not null, '
                'primary key (topology, size, theta, fields_digest))')
            cursor.execute('delete from spectra where tolerances != ?',
                           (self._tag,))
            return cursor.rowcount

    @property
    def permanent(self):
        return self._dbpath is not None

    @staticmethod
    def encode(spectrum):
        return pickle.dumps(spectrum)

    @staticmethod
    def decode(blob):
        return pickle.loads(blob)

    @contextlib.contextmanager
    def connection(self):
        if not self._dbpath:
            raise TypeError('Spectrum store is not yet persistent')

        with sqlite3.connect(self._dbpath) as connection:
            yield connection.cursor()

    @_retry
    def __getitem__(self, key):
        with self.connection() as cursor:
            cursor.execute(
                'select value from spectra where topology=? and size=? '
                'and theta=? and fields_digest=? and tolerances=?',
                tuple(SpectrumKey(*key)) + (self._tag,))
            value = cursor.fetchone()

        if value is None:
            raise KeyError(key)

        return self.decode(value[0])

    @_retry
    def __setitem__(self, key, spectrum):
        with self.connection() as cursor:
            cursor.execute(
                'insert or replace into spectra values (?, ?, ?, ?, ?, ?)',
                tuple(SpectrumKey(*key))
                + (self._tag, self.encode(spectrum)))

    @_retry
    def __delitem__(self, key):
        with self.connection() as cursor:
            cursor.execute(
                'delete from spectra where topology=? and size=? '
                'and theta=? and fields_digest=?', tuple(SpectrumKey(*key)))
            if not cursor.rowcount:
                raise KeyError(key)

    @_retry
    def __iter__(self):
        with self.connection() as cursor:
            cursor.execute(
                'select topology, size, theta, fields_digest from spectra '
                'where tolerances=?', (self._tag,))
            records = cursor.fetchall()

        return iter([SpectrumKey(*record) for record in records])

    @_retry
    def __len__(self):
        with self.connection() as cursor:
            cursor.execute(
                'select count(*) from spectra where tolerances=?',
                (self._tag,))
            return cursor.fetchone()[0]
