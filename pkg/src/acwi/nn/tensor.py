"""A small reverse-mode tape over numpy arrays.

Every operation returns a new :class:`Tensor` that remembers its parents and
a closure propagating the upstream gradient to them. Calling
:meth:`Tensor.backward` on a scalar walks the graph in reverse topological
order. Leaf tensors owned by a :class:`~acwi.nn.params.ParamSet` accumulate
into their persistent ``grad`` buffers, so repeated backward calls add up
until the buffers are cleared.
"""

from __future__ import annotations

import numpy as np

from acwi.errors import ConfigError, NumericError


def _unbroadcast(grad, shape):
    """Sum ``grad`` down to ``shape`` after numpy broadcasting."""
    if grad.shape == shape:
        return grad
    ndiff = grad.ndim - len(shape)
    if ndiff > 0:
        grad = grad.sum(axis=tuple(range(ndiff)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward", "name")

    def __init__(self, data, requires_grad=False, name=None, _parents=(), _backward=None):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self.requires_grad = requires_grad
        self.name = name
        self._parents = _parents
        self._backward = _backward

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    def item(self):
        return float(self.data)

    def numpy(self):
        return self.data

    def detach(self):
        return Tensor(self.data)

    def _accumulate(self, g):
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += g

    def backward(self):
        """Accumulate d(self)/d(leaf) into every participating leaf."""
        if self.data.size != 1:
            raise ConfigError(f"backward() needs a scalar, got shape {self.data.shape}")
        value = float(self.data)
        if not np.isfinite(value):
            raise NumericError(f"non-finite loss: {value}", value=value)

        order = []
        seen = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if p.requires_grad and id(p) not in seen:
                    stack.append((p, False))

        # Interior nodes hold transient gradients; leaves keep theirs.
        grads = {id(self): np.ones_like(self.data)}
        for node in reversed(order):
            g = grads.pop(id(node), None)
            if g is None:
                continue
            if node._backward is None:
                node._accumulate(g)
                continue
            for parent, pg in zip(node._parents, node._backward(g)):
                if pg is None or not parent.requires_grad:
                    continue
                key = id(parent)
                if key in grads:
                    grads[key] = grads[key] + pg
                else:
                    grads[key] = pg

    # operator sugar
    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return mul(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def __getitem__(self, idx):
        return index(self, idx)

    def sum(self, axis=None, keepdims=False):
        return sum_(self, axis, keepdims)

    def mean(self, axis=None, keepdims=False):
        return mean(self, axis, keepdims)


def as_tensor(x):
    return x if isinstance(x, Tensor) else Tensor(x)


def _node(data, parents, backward):
    req = any(p.requires_grad for p in parents)
    if not req:
        return Tensor(data)
    return Tensor(data, requires_grad=True, _parents=parents, _backward=backward)


def add(a, b):
    a, b = as_tensor(a), as_tensor(b)
    sa, sb = a.data.shape, b.data.shape
    return _node(a.data + b.data, (a, b), lambda g: (_unbroadcast(g, sa), _unbroadcast(g, sb)))


def sub(a, b):
    a, b = as_tensor(a), as_tensor(b)
    sa, sb = a.data.shape, b.data.shape
    return _node(a.data - b.data, (a, b), lambda g: (_unbroadcast(g, sa), _unbroadcast(-g, sb)))


def mul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    ad, bd = a.data, b.data

    def bw(g):
        return _unbroadcast(g * bd, ad.shape), _unbroadcast(g * ad, bd.shape)

    return _node(ad * bd, (a, b), bw)


def div(a, b):
    a, b = as_tensor(a), as_tensor(b)
    ad, bd = a.data, b.data
    out = ad / bd

    def bw(g):
        return _unbroadcast(g / bd, ad.shape), _unbroadcast(-g * out / bd, bd.shape)

    return _node(out, (a, b), bw)


def matmul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    ad, bd = a.data, b.data
    if ad.ndim != 2 or bd.ndim != 2 or ad.shape[1] != bd.shape[0]:
        raise ConfigError(f"matmul shape mismatch: {ad.shape} @ {bd.shape}")

    def bw(g):
        return (g @ bd.T if a.requires_grad else None), (ad.T @ g if b.requires_grad else None)

    return _node(ad @ bd, (a, b), bw)


def tanh(a):
    a = as_tensor(a)
    out = np.tanh(a.data)
    return _node(out, (a,), lambda g: (g * (1.0 - out * out),))


def exp(a):
    a = as_tensor(a)
    out = np.exp(a.data)
    return _node(out, (a,), lambda g: (g * out,))


def log(a):
    a = as_tensor(a)
    ad = a.data
    return _node(np.log(ad), (a,), lambda g: (g / ad,))


def sqrt(a):
    a = as_tensor(a)
    out = np.sqrt(a.data)
    return _node(out, (a,), lambda g: (g * 0.5 / out,))


def square(a):
    a = as_tensor(a)
    ad = a.data
    return _node(ad * ad, (a,), lambda g: (2.0 * g * ad,))


def sum_(a, axis=None, keepdims=False):
    a = as_tensor(a)
    shape = a.data.shape

    def bw(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, shape).copy(),)

    return _node(a.data.sum(axis=axis, keepdims=keepdims), (a,), bw)


def mean(a, axis=None, keepdims=False):
    a = as_tensor(a)
    n = a.data.size if axis is None else a.data.shape[axis]
    return mul(sum_(a, axis, keepdims), 1.0 / n)


def clamp(a, lo, hi):
    """Hard clamp; the gradient is zero wherever the bound is active."""
    a = as_tensor(a)
    ad = a.data
    mask = (ad >= lo) & (ad <= hi)
    return _node(np.clip(ad, lo, hi), (a,), lambda g: (g * mask,))


def minimum(a, b):
    """Elementwise min; ties send the gradient to ``a``."""
    a, b = as_tensor(a), as_tensor(b)
    ad, bd = a.data, b.data
    pick_a = ad <= bd

    def bw(g):
        return _unbroadcast(g * pick_a, ad.shape), _unbroadcast(g * ~pick_a, bd.shape)

    return _node(np.where(pick_a, ad, bd), (a, b), bw)


def concat(tensors, axis=1):
    tensors = [as_tensor(t) for t in tensors]
    sizes = [t.data.shape[axis] for t in tensors]
    splits = np.cumsum(sizes)[:-1]

    def bw(g):
        return tuple(np.split(g, splits, axis=axis))

    return _node(np.concatenate([t.data for t in tensors], axis=axis), tuple(tensors), bw)


def index(a, idx, unique=False):
    """``a[idx]``; pass ``unique=True`` when no element is selected twice."""
    a = as_tensor(a)
    shape = a.data.shape
    direct = unique or isinstance(idx, slice)

    def bw(g):
        out = np.zeros(shape)
        if direct:
            out[idx] = g
        else:
            np.add.at(out, idx, g)
        return (out,)

    return _node(a.data[idx], (a,), bw)


def log_softmax(a, axis=-1):
    a = as_tensor(a)
    z = a.data - a.data.max(axis=axis, keepdims=True)
    lse = np.log(np.exp(z).sum(axis=axis, keepdims=True))
    out = z - lse
    soft = np.exp(out)

    def bw(g):
        return (g - soft * g.sum(axis=axis, keepdims=True),)

    return _node(out, (a,), bw)


def softmax(a, axis=-1):
    a = as_tensor(a)
    z = a.data - a.data.max(axis=axis, keepdims=True)
    e = np.exp(z)
    out = e / e.sum(axis=axis, keepdims=True)

    def bw(g):
        return (out * (g - (g * out).sum(axis=axis, keepdims=True)),)

    return _node(out, (a,), bw)


def pick(a, labels):
    """Select ``a[i, labels[i]]`` for every row ``i``."""
    labels = np.asarray(labels, dtype=np.int64)
    return index(a, (np.arange(len(labels)), labels), unique=True)
