"""Pure-numpy MLP kernels, the fallback when the compiled extension is absent.

Each factory prebuilds every array view a call needs, so the forward
pass touches only preallocated memory (the same steady-state contract
the compiled kernels honor).  Dot products go through BLAS, so the last
bits may differ from the compiled kernels' sequential loops; agreement
is within a few ulp either way.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"

_TAG_TANH = 1


class _Forward:
    __slots__ = ("_steps", "_out")

    def __init__(self, net, ws):
        sizes = net.topology.layer_sizes
        bufs = (ws.buf_a, ws.buf_b)
        steps = []
        for l, w in enumerate(net.weights):
            x = bufs[l % 2][: sizes[l]]
            y = bufs[(l + 1) % 2][: sizes[l + 1]]
            b = net.biases[l] if net.biases_enabled else None
            tanh = int(net._plan.tags[l]) == _TAG_TANH
            steps.append((w, b, x, y, tanh))
        self._steps = tuple(steps)
        self._out = steps[-1][3]

    def __call__(self):
        for w, b, x, y, tanh in self._steps:
            np.matmul(w, x, out=y)
            if b is not None:
                np.add(y, b, out=y)
            if tanh:
                np.tanh(y, out=y)
        return float(self._out[0])


class _Backprop:
    __slots__ = ("_fwd_steps", "_bwd_steps", "_out", "_out_tanh", "_delta0")

    def __init__(self, net, tws):
        plan = net._plan
        sizes = net.topology.layer_sizes
        n_trans = net.topology.transitions
        if sizes[-1] != 1:
            raise ValueError("backprop kernels support scalar-output networks only")
        acts = [
            tws.act[int(plan.act_offsets[l]): int(plan.act_offsets[l + 1])]
            for l in range(len(sizes))
        ]
        grad_w = net.grad_views(tws.grad)
        grad_b = net.grad_bias_views(tws.grad) if net.biases_enabled else [None] * n_trans

        fwd = []
        for l, w in enumerate(net.weights):
            b = net.biases[l] if net.biases_enabled else None
            tanh = int(plan.tags[l]) == _TAG_TANH
            fwd.append((w, b, acts[l], acts[l + 1], tanh))
        self._fwd_steps = tuple(fwd)
        self._out = acts[-1]
        self._out_tanh = int(plan.tags[-1]) == _TAG_TANH

        deltas = (tws.delta_a, tws.delta_b)
        bwd = []
        for i, l in enumerate(range(n_trans - 1, -1, -1)):
            d_out = deltas[i % 2][: sizes[l + 1]]
            d_col = d_out.reshape(-1, 1)
            d_in = deltas[(i + 1) % 2][: sizes[l]] if l > 0 else None
            tmp_in = tws.tmp[: sizes[l]] if l > 0 else None
            tanh_in = l > 0 and int(plan.tags[l - 1]) == _TAG_TANH
            bwd.append(
                (net.weights[l].T, grad_w[l], grad_b[l], d_out, d_col,
                 acts[l], d_in, tmp_in, tanh_in)
            )
        self._bwd_steps = tuple(bwd)
        self._delta0 = bwd[0][3]

    def __call__(self, target):
        for w, b, x, y, tanh in self._fwd_steps:
            np.matmul(w, x, out=y)
            if b is not None:
                np.add(y, b, out=y)
            if tanh:
                np.tanh(y, out=y)
        y = float(self._out[0])
        delta = y - target
        if self._out_tanh:
            delta *= 1.0 - y * y
        self._delta0[0] = delta
        for wt, gw, gb, d_out, d_col, a_in, d_in, tmp_in, tanh_in in self._bwd_steps:
            np.multiply(d_col, a_in, out=gw)
            if gb is not None:
                np.copyto(gb, d_out)
            if d_in is not None:
                np.matmul(wt, d_out, out=d_in)
                if tanh_in:
                    np.multiply(a_in, a_in, out=tmp_in)
                    np.subtract(1.0, tmp_in, out=tmp_in)
                    np.multiply(d_in, tmp_in, out=d_in)
        return y


def make_forward(net, ws):
    return _Forward(net, ws)


def make_backprop(net, tws):
    return _Backprop(net, tws)
