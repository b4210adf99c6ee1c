# cython: boundscheck=True, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled MLP kernels: sequential-loop forward and backprop.

Same call contract as ``_kernels_py``: factories capture the network's
packed parameter vector and a workspace's buffers, the returned objects
run with no per-call memory acquisition.
"""

from libc.math cimport tanh as ctanh

BACKEND_NAME = "compiled"

cdef long TAG_TANH = 1


cdef class _Forward:
    cdef double[::1] params
    cdef long[::1] sizes
    cdef long[::1] tags
    cdef long[::1] w_offsets
    cdef long[::1] b_offsets
    cdef bint use_bias
    cdef double[::1] buf_a
    cdef double[::1] buf_b
    cdef int n_trans

    def __init__(self, net, ws):
        plan = net._plan
        self.params = net.params
        self.sizes = plan.sizes
        self.tags = plan.tags
        self.w_offsets = plan.w_offsets
        self.b_offsets = plan.b_offsets
        self.use_bias = plan.use_bias
        self.buf_a = ws.buf_a
        self.buf_b = ws.buf_b
        self.n_trans = len(net.weights)

    def __call__(self):
        cdef double[::1] x = self.buf_a
        cdef double[::1] y = self.buf_b
        cdef double[::1] swap
        cdef long l, i, j, n_in, n_out, off, row
        cdef double acc
        for l in range(self.n_trans):
            n_in = self.sizes[l]
            n_out = self.sizes[l + 1]
            off = self.w_offsets[l]
            for i in range(n_out):
                row = off + i * n_in
                acc = 0.0
                for j in range(n_in):
                    acc += self.params[row + j] * x[j]
                if self.use_bias:
                    acc += self.params[self.b_offsets[l] + i]
                if self.tags[l] == TAG_TANH:
                    acc = ctanh(acc)
                y[i] = acc
            swap = x
            x = y
            y = swap
        return x[0]


cdef class _Backprop:
    cdef double[::1] params
    cdef double[::1] grad
    cdef double[::1] act
    cdef double[::1] delta_a
    cdef double[::1] delta_b
    cdef long[::1] sizes
    cdef long[::1] tags
    cdef long[::1] w_offsets
    cdef long[::1] b_offsets
    cdef long[::1] act_offsets
    cdef bint use_bias
    cdef int n_trans

    def __init__(self, net, tws):
        plan = net._plan
        if net.topology.layer_sizes[-1] != 1:
            raise ValueError("backprop kernels support scalar-output networks only")
        self.params = net.params
        self.grad = tws.grad
        self.act = tws.act
        self.delta_a = tws.delta_a
        self.delta_b = tws.delta_b
        self.sizes = plan.sizes
        self.tags = plan.tags
        self.w_offsets = plan.w_offsets
        self.b_offsets = plan.b_offsets
        self.act_offsets = plan.act_offsets
        self.use_bias = plan.use_bias
        self.n_trans = len(net.weights)

    def __call__(self, double target):
        cdef double[::1] d_out = self.delta_a
        cdef double[::1] d_in = self.delta_b
        cdef double[::1] swap
        cdef long l, i, j, n_in, n_out, off, row, a_in, a_out
        cdef double acc, y, d, a

        # Forward, storing every layer's activations.
        for l in range(self.n_trans):
            n_in = self.sizes[l]
            n_out = self.sizes[l + 1]
            off = self.w_offsets[l]
            a_in = self.act_offsets[l]
            a_out = self.act_offsets[l + 1]
            for i in range(n_out):
                row = off + i * n_in
                acc = 0.0
                for j in range(n_in):
                    acc += self.params[row + j] * self.act[a_in + j]
                if self.use_bias:
                    acc += self.params[self.b_offsets[l] + i]
                if self.tags[l] == TAG_TANH:
                    acc = ctanh(acc)
                self.act[a_out + i] = acc
        y = self.act[self.act_offsets[self.n_trans]]

        # Output delta for loss 0.5*(y - target)^2.
        d = y - target
        if self.tags[self.n_trans - 1] == TAG_TANH:
            d *= 1.0 - y * y
        d_out[0] = d

        # Reverse sweep: gradients then the next layer's delta.
        for l in range(self.n_trans - 1, -1, -1):
            n_in = self.sizes[l]
            n_out = self.sizes[l + 1]
            off = self.w_offsets[l]
            a_in = self.act_offsets[l]
            for i in range(n_out):
                row = off + i * n_in
                d = d_out[i]
                for j in range(n_in):
                    self.grad[row + j] = d * self.act[a_in + j]
                if self.use_bias:
                    self.grad[self.b_offsets[l] + i] = d
            if l > 0:
                for j in range(n_in):
                    acc = 0.0
                    for i in range(n_out):
                        acc += self.params[off + i * n_in + j] * d_out[i]
                    if self.tags[l - 1] == TAG_TANH:
                        a = self.act[a_in + j]
                        acc *= 1.0 - a * a
                    d_in[j] = acc
                swap = d_out
                d_out = d_in
                d_in = swap
        return y


def make_forward(net, ws):
    return _Forward(net, ws)


def make_backprop(net, tws):
    return _Backprop(net, tws)
