"""Fixed-topology multilayer perceptron with an allocation-free forward pass.

The default network maps body velocities (u, w) to one scalar force
estimate through layers of sizes 2-10-20-50-10-1 with activations
linear, tanh, tanh, linear, linear.  Two independent instances are
trained, one per force component, since the output layer is a single
unit.

Parameters live in one packed float64 vector (weights first, transition
by transition in row-major destination-by-source order, then biases if
enabled).  Inference runs through two preallocated ping-pong buffers of
the maximum layer width, so a constructed network performs no dynamic
memory acquisition per call -- the contract that lets the same kernel
run on memory-constrained flight hardware.  Kernels come from the
compiled extension when built, with a pure-numpy fallback selected at
import (see ``_backend``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend

ACTIVATIONS = ("linear", "tanh")
TAG_LINEAR = 0
TAG_TANH = 1

# Weight total reported for the original embedded build of this topology.
# A fully-connected reading of the same layer sizes gives 1730 (see
# param_count); the 18-weight gap (the first transition tallied as 2
# rather than 2*10) cannot be reproduced by any fully-connected layout,
# so this package implements fully-connected layers and keeps the
# reported figure only as a documented reference value.
REPORTED_EMBEDDED_WEIGHT_COUNT = 1712

DEFAULT_LAYER_SIZES = (2, 10, 20, 50, 10, 1)
DEFAULT_ACTIVATIONS = ("linear", "tanh", "tanh", "linear", "linear")

WEIGHT_FILE_MAGIC = "MLPWF"
WEIGHT_FILE_VERSION = 1


class WeightFileError(Exception):
    """Base class for weight-file load failures."""


class WeightFileVersionError(WeightFileError):
    """Magic or version line does not match the supported format."""


class WeightFileShapeError(WeightFileError):
    """Declared topology and stored values disagree (or file truncated)."""


class WeightFileValueError(WeightFileError):
    """A stored value is non-finite or unparseable."""


class UnknownActivationError(WeightFileError):
    """Activation tag outside the supported set."""


@dataclass(frozen=True)
class Topology:
    """Layer sizes (input first) and one activation tag per non-input layer."""

    layer_sizes: tuple[int, ...]
    activations: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        sizes = tuple(int(n) for n in self.layer_sizes)
        acts = tuple(self.activations) if self.activations else ("linear",) * (len(sizes) - 1)
        object.__setattr__(self, "layer_sizes", sizes)
        object.__setattr__(self, "activations", acts)
        if len(sizes) < 2:
            raise ValueError("topology needs at least an input and an output layer")
        if any(n <= 0 for n in sizes):
            raise ValueError(f"layer sizes must be positive, got {sizes}")
        if len(acts) != len(sizes) - 1:
            raise ValueError("need exactly one activation tag per non-input layer")
        for tag in acts:
            if tag not in ACTIVATIONS:
                raise UnknownActivationError(f"unsupported activation {tag!r}")

    @property
    def transitions(self) -> int:
        return len(self.layer_sizes) - 1

    @property
    def max_width(self) -> int:
        return max(self.layer_sizes)


DEFAULT_TOPOLOGY = Topology(DEFAULT_LAYER_SIZES, DEFAULT_ACTIVATIONS)


def param_count(topology: Topology, biases_enabled: bool = False) -> int:
    """Total parameter count: sum of n_in*n_out per transition, plus biases."""
    sizes = topology.layer_sizes
    total = sum(a * b for a, b in zip(sizes[:-1], sizes[1:]))
    if biases_enabled:
        total += sum(sizes[1:])
    return total


class _Plan:
    """Kernel-facing layout arrays shared by both backends."""

    def __init__(self, topology: Topology, biases_enabled: bool):
        sizes = topology.layer_sizes
        self.sizes = np.asarray(sizes, dtype=np.int64)
        self.tags = np.asarray(
            [TAG_TANH if t == "tanh" else TAG_LINEAR for t in topology.activations],
            dtype=np.int64,
        )
        w_offsets = []
        offset = 0
        for n_in, n_out in zip(sizes[:-1], sizes[1:]):
            w_offsets.append(offset)
            offset += n_in * n_out
        self.weight_total = offset
        b_offsets = []
        for n_out in sizes[1:]:
            b_offsets.append(offset if biases_enabled else -1)
            if biases_enabled:
                offset += n_out
        self.w_offsets = np.asarray(w_offsets, dtype=np.int64)
        self.b_offsets = np.asarray(b_offsets, dtype=np.int64)
        self.act_offsets = np.asarray(np.concatenate(([0], np.cumsum(sizes))), dtype=np.int64)
        self.act_total = int(self.act_offsets[-1])
        self.use_bias = biases_enabled
        self.n_params = offset
        self.max_width = topology.max_width


class Network:
    """Packed-parameter MLP; immutable during inference, mutated by training."""

    def __init__(self, topology: Topology, params: np.ndarray | None = None,
                 biases_enabled: bool = False):
        self.topology = topology
        self.biases_enabled = biases_enabled
        self._plan = _Plan(topology, biases_enabled)
        if params is None:
            params = np.zeros(self._plan.n_params, dtype=np.float64)
        else:
            params = np.ascontiguousarray(params, dtype=np.float64)
            if params.shape != (self._plan.n_params,):
                raise ValueError(
                    f"expected {self._plan.n_params} packed parameters, got {params.shape}"
                )
        self.params = params
        self.weights = self._weight_views(self.params)
        self.biases = self._bias_views(self.params) if biases_enabled else None
        self._default_ws: Workspace | None = None

    def _weight_views(self, packed: np.ndarray) -> list[np.ndarray]:
        sizes = self.topology.layer_sizes
        views = []
        for l, (n_in, n_out) in enumerate(zip(sizes[:-1], sizes[1:])):
            off = int(self._plan.w_offsets[l])
            views.append(packed[off:off + n_in * n_out].reshape(n_out, n_in))
        return views

    def _bias_views(self, packed: np.ndarray) -> list[np.ndarray]:
        sizes = self.topology.layer_sizes
        return [
            packed[int(off):int(off) + n_out]
            for off, n_out in zip(self._plan.b_offsets, sizes[1:])
        ]

    def grad_views(self, packed_grad: np.ndarray) -> list[np.ndarray]:
        """Split a packed gradient into per-transition weight matrices."""
        return self._weight_views(packed_grad)

    def grad_bias_views(self, packed_grad: np.ndarray) -> list[np.ndarray]:
        if not self.biases_enabled:
            raise ValueError("network has no biases")
        return self._bias_views(packed_grad)

    def workspace(self, kernels=None) -> "Workspace":
        """Fresh scratch buffers; concurrent callers should own one each."""
        return Workspace(self, kernels)

    def default_workspace(self) -> "Workspace":
        if self._default_ws is None:
            self._default_ws = Workspace(self)
        return self._default_ws

    def invalidate_workspaces(self) -> None:
        """Drop cached workspaces (call after replacing ``params`` wholesale)."""
        self._default_ws = None

    def copy(self) -> "Network":
        return Network(self.topology, self.params.copy(), self.biases_enabled)


class Workspace:
    """Inference scratch: two ping-pong buffers of the maximum layer width."""

    def __init__(self, net: Network, kernels=None):
        width = net._plan.max_width
        self.buf_a = np.empty(width, dtype=np.float64)
        self.buf_b = np.empty(width, dtype=np.float64)
        self.kernels = kernels or _backend.default_kernels()
        self._run = self.kernels.make_forward(net, self)
        self._input_size = net.topology.layer_sizes[0]


class TrainWorkspace:
    """Backprop scratch: activation stack, delta buffers, packed gradient."""

    def __init__(self, net: Network, kernels=None):
        plan = net._plan
        width = plan.max_width
        self.act = np.empty(plan.act_total, dtype=np.float64)
        self.delta_a = np.empty(width, dtype=np.float64)
        self.delta_b = np.empty(width, dtype=np.float64)
        self.tmp = np.empty(width, dtype=np.float64)
        self.grad = np.empty(plan.n_params, dtype=np.float64)
        self.kernels = kernels or _backend.default_kernels()
        self._run = self.kernels.make_backprop(net, self)
        self._input_size = net.topology.layer_sizes[0]


def init_network(
    topology: Topology,
    seed: int,
    scheme: str = "uniform_xavier",
    biases_enabled: bool = False,
) -> Network:
    """Deterministic initialization.

    ``zeros`` fills everything with 0; ``uniform_xavier`` draws each
    transition uniformly from +-sqrt(6 / (n_in + n_out)).  Biases, when
    enabled, start at zero under either scheme.
    """
    net = Network(topology, None, biases_enabled)
    if scheme == "zeros":
        return net
    if scheme != "uniform_xavier":
        raise ValueError(f"unknown init scheme {scheme!r}")
    rng = np.random.default_rng(seed)
    for w in net.weights:
        n_out, n_in = w.shape
        bound = math.sqrt(6.0 / (n_in + n_out))
        w[...] = rng.uniform(-bound, bound, size=(n_out, n_in))
    return net


def forward(net: Network, x, workspace: Workspace | None = None) -> float:
    """Scalar network output for input vector ``x`` (usually (u, w)).

    Uses the network's own scratch buffers unless ``workspace`` is
    given; no memory is acquired per call once the workspace exists.
    """
    ws = workspace if workspace is not None else net.default_workspace()
    buf = ws.buf_a
    n = ws._input_size
    if len(x) != n:
        raise ValueError(f"expected input of length {n}, got {len(x)}")
    for i in range(n):
        buf[i] = x[i]
    return ws._run()


def save_weights(net: Network, destination) -> None:
    """Write the versioned text weight format (bit-exact round trip)."""
    if not np.all(np.isfinite(net.params)):
        raise WeightFileValueError("refusing to save non-finite parameters")
    lines = [
        f"{WEIGHT_FILE_MAGIC} {WEIGHT_FILE_VERSION}",
        " ".join(str(n) for n in net.topology.layer_sizes),
        " ".join(net.topology.activations),
        f"biases {1 if net.biases_enabled else 0}",
    ]
    for w in net.weights:
        lines.extend(repr(v) for v in w.ravel().tolist())
    if net.biases_enabled:
        for b in net.biases:
            lines.extend(repr(v) for v in b.tolist())
    with open(destination, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def load_weights(source) -> Network:
    """Parse a weight file written by :func:`save_weights`."""
    with open(source, "r", encoding="ascii") as fh:
        lines = [line.strip() for line in fh]
    lines = [line for line in lines if line]
    if len(lines) < 4:
        raise WeightFileShapeError("file too short for a weight header")
    magic = lines[0].split()
    if len(magic) != 2 or magic[0] != WEIGHT_FILE_MAGIC:
        raise WeightFileVersionError(f"bad magic line {lines[0]!r}")
    if magic[1] != str(WEIGHT_FILE_VERSION):
        raise WeightFileVersionError(f"unsupported version {magic[1]!r}")
    try:
        sizes = tuple(int(s) for s in lines[1].split())
    except ValueError as exc:
        raise WeightFileShapeError(f"bad layer-size line {lines[1]!r}") from exc
    tags = tuple(lines[2].split())
    for tag in tags:
        if tag not in ACTIVATIONS:
            raise UnknownActivationError(f"unknown activation tag {tag!r}")
    bias_parts = lines[3].split()
    if len(bias_parts) != 2 or bias_parts[0] != "biases" or bias_parts[1] not in ("0", "1"):
        raise WeightFileShapeError(f"bad biases line {lines[3]!r}")
    biases_enabled = bias_parts[1] == "1"
    try:
        topology = Topology(sizes, tags)
    except UnknownActivationError:
        raise
    except ValueError as exc:
        raise WeightFileShapeError(str(exc)) from exc

    expected = param_count(topology, biases_enabled)
    value_lines = lines[4:]
    if len(value_lines) != expected:
        raise WeightFileShapeError(
            f"expected {expected} parameter lines, found {len(value_lines)}"
        )
    values = np.empty(expected, dtype=np.float64)
    for i, text in enumerate(value_lines):
        try:
            values[i] = float(text)
        except ValueError as exc:
            raise WeightFileValueError(f"unparseable value {text!r}") from exc
    if not np.all(np.isfinite(values)):
        raise WeightFileValueError("weight file contains non-finite values")
    return Network(topology, values, biases_enabled)


def networks_equal(a: Network, b: Network) -> bool:
    """Field-by-field equality, bit-exact on parameters."""
    return (
        a.topology == b.topology
        and a.biases_enabled == b.biases_enabled
        and np.array_equal(a.params, b.params)
    )
