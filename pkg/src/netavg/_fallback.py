"""Pure numpy implementation of the counting and BDeu kernels."""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln


def _strides(cols, cards) -> tuple[np.ndarray, int]:
    sizes = np.asarray([cards[c] for c in cols], dtype=np.intp)
    strides = np.ones(len(sizes), dtype=np.intp)
    if len(sizes) > 1:
        strides[:-1] = np.cumprod(sizes[::-1])[::-1][1:]
    return strides, int(np.prod(sizes)) if len(sizes) else 1


def config_index(codes: np.ndarray, cols, cards) -> np.ndarray:
    cols = list(cols)
    strides, _ = _strides(cols, cards)
    if not cols:
        return np.zeros(codes.shape[0], dtype=np.intp)
    return codes[:, cols].astype(np.intp) @ strides


def family_counts(codes: np.ndarray, child: int, parents, cards) -> np.ndarray:
    parents = list(parents)
    _, q = _strides(parents, cards)
    r = int(cards[child])
    idx = config_index(codes, parents, cards) * r + codes[:, child]
    return np.bincount(idx, minlength=q * r).astype(np.int64).reshape(q, r)


def cross_counts(codes: np.ndarray, x: int, y: int, z, cards) -> np.ndarray:
    z = list(z)
    _, q = _strides(z, cards)
    rx, ry = int(cards[x]), int(cards[y])
    idx = (codes[:, x].astype(np.intp) * ry + codes[:, y]) * q + config_index(codes, z, cards)
    return np.bincount(idx, minlength=rx * ry * q).astype(np.int64).reshape(rx, ry, q)


def bdeu_from_counts(counts: np.ndarray, ess: float) -> float:
    q, r = counts.shape
    a_j = ess / q
    a_jk = ess / (q * r)
    nj = counts.sum(axis=1)
    seen = nj > 0
    if not seen.any():
        return 0.0
    c = counts[seen]
    nz = c > 0
    cells = np.where(nz, gammaln(a_jk + c) - gammaln(a_jk), 0.0).sum(axis=1)
    return float(np.sum(gammaln(a_j) - gammaln(a_j + nj[seen]) + cells))


def bdeu_score(codes: np.ndarray, child: int, parents, cards, ess: float) -> float:
    return bdeu_from_counts(family_counts(codes, child, parents, cards), ess)
