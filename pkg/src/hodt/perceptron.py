"""Hashed linear models and averaged-perceptron training.

Features are strings; they land in a fixed-size weight vector through an
8-byte blake2b digest (unsalted, so runs and machines agree), optionally
conjoined with a small integer key (a class id, a direction bucket) by a
splitmix64 round.  No vocabulary is stored: collisions are accepted and
the training loop never materializes feature names.

Averaging uses the running-totals trick: alongside w we keep
u = sum of t * delta over all updates, where t counts examples seen, and
the averaged vector is w - u / T.  A model trained for zero epochs stays
all-zero by construction.
"""

import json
from hashlib import blake2b

import numpy as np

from .errors import ModelFormatError
from .rng import GAMMA, MASK64, mix64

DIM_BITS = 22

_GAMMA_U64 = np.uint64(GAMMA)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def feature_hash(text):
    """Full 64-bit digest of one feature string."""
    digest = blake2b(text.encode('utf-8'), digest_size=8).digest()
    return int.from_bytes(digest, 'little')


def hash_features(texts):
    """uint64 array of digests for a list of feature strings."""
    out = np.empty(len(texts), dtype=np.uint64)
    for i, text in enumerate(texts):
        out[i] = feature_hash(text)
    return out


def _mix_vec(x):
    x = x ^ (x >> np.uint64(30))
    x = x * _M1
    x = x ^ (x >> np.uint64(27))
    x = x * _M2
    return x ^ (x >> np.uint64(31))


def conjoin(hashes, key):
    """Mix a key into each digest; key 0 is distinct from no conjunction."""
    with np.errstate(over='ignore'):  # wraparound mod 2**64 is the point
        shifted = hashes + np.uint64((key + 1) & MASK64) * _GAMMA_U64
        return _mix_vec(shifted)


def conjoin_grid(hashes, n_keys):
    """(n_keys, len(hashes)) digest matrix, row k = conjoin(hashes, k)."""
    with np.errstate(over='ignore'):
        keys = np.arange(1, n_keys + 1, dtype=np.uint64) * _GAMMA_U64
        return _mix_vec(hashes[None, :] + keys[:, None])


class LinearModel:
    """A flat weight vector addressed by masked digests.

    meta is a caller-owned json-serializable dict (label alphabets,
    featurizer settings); it rides along in the model file.
    """

    def __init__(self, dim_bits=DIM_BITS, meta=None):
        if not 1 <= dim_bits <= 30:
            raise ValueError('dim_bits out of range')
        self.dim_bits = dim_bits
        self.mask = (1 << dim_bits) - 1
        self.weights = np.zeros(1 << dim_bits)
        self.meta = dict(meta or {})

    def indices(self, hashes):
        return (hashes & np.uint64(self.mask)).astype(np.intp)

    def score(self, hashes):
        return float(self.weights[self.indices(hashes)].sum())

    def score_rows(self, digest_matrix):
        """Row sums of weights over a matrix of digests."""
        idx = (digest_matrix & np.uint64(self.mask)).astype(np.intp)
        return self.weights[idx].sum(axis=1)

    def to_json(self):
        nonzero = np.nonzero(self.weights)[0]
        return json.dumps({
            'kind': 'linear',
            'dim_bits': self.dim_bits,
            'meta': self.meta,
            'weights': [[int(i), self.weights[i]] for i in nonzero],
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f'model file is not json: {exc}') from None
        if not isinstance(obj, dict) or obj.get('kind') != 'linear':
            raise ModelFormatError("expected a model with kind 'linear'")
        model = cls(obj['dim_bits'], obj.get('meta'))
        for i, value in obj['weights']:
            if not 0 <= i <= model.mask:
                raise ModelFormatError(f'weight index {i} out of range')
            model.weights[i] = value
        return model

    def save(self, path):
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.to_json())
            f.write('\n')

    @classmethod
    def load(cls, path):
        with open(path, encoding='utf-8') as f:
            return cls.from_json(f.read())


class AveragedTrainer:
    """Perceptron updates against a LinearModel, averaged on finish."""

    def __init__(self, model):
        self.model = model
        self._totals = np.zeros_like(model.weights)
        self._tick = 0

    def begin_example(self):
        self._tick += 1

    def update(self, hashes, delta):
        """Add delta (scalar or per-feature array) at the hashed slots."""
        idx = self.model.indices(np.asarray(hashes, dtype=np.uint64))
        np.add.at(self.model.weights, idx, delta)
        np.add.at(self._totals, idx, np.multiply(delta, float(self._tick)))

    def update_indices(self, idx, delta):
        """Same, for already-masked integer indices."""
        np.add.at(self.model.weights, idx, delta)
        np.add.at(self._totals, idx, np.multiply(delta, float(self._tick)))

    def average(self):
        """Replace the working weights with their running average."""
        if self._tick:
            self.model.weights -= self._totals / self._tick
        return self.model


def mixdown(parts):
    """One 64-bit key from several small non-negative ints (feature-id
    packing for grids that conjoin more than one thing)."""
    acc = 0
    for p in parts:
        acc = mix64((acc + p + 1) * GAMMA & MASK64)
    return acc
