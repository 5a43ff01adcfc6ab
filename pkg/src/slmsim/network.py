"""Device graphs and sequential, one-message-in-flight event propagation.

A network owns one :class:`RandomStream`.  Every event starts at the single
source and is handed from device to device along the wiring until it reaches
a tap with no outgoing edge.  Devices are called synchronously in hop order,
so there is never more than one message moving through the graph.

Draw order within one event is fixed by the walk: the source draw first, then
one back-end draw per learning machine in the order the message meets them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, TextIO

from .core import ConfigError, Message, RandomStream, TopologyError, check_alpha
from .devices import PhaseShifter, Source, SourceConfig, Tap
from .slm import StochasticBeamSplitter


class Hop(NamedTuple):
    device: int
    in_channel: int | None
    out_channel: int
    message: Message


class Detection(NamedTuple):
    detector: int
    message: Message


class Network:
    def __init__(self, stream: RandomStream):
        self.stream = stream
        self.devices: list = []
        self.edges: dict[tuple[int, int], tuple[int, int]] = {}
        self.source_id: int | None = None
        self.detectors: dict[int, int] = {}
        self.sequence = 0
        self.trace: TextIO | None = None
        self.last_trace: list[Hop] | None = None
        self._next: list | None = None
        self._labels: dict[int, int] = {}

    def add(self, device) -> int:
        if device.kind == "source":
            if self.source_id is not None:
                raise TopologyError(len(self.devices), "a network has exactly one source")
            self.source_id = len(self.devices)
        self.devices.append(device)
        self._next = None
        return len(self.devices) - 1

    def connect(self, src: int, out_channel: int, dst: int, in_channel: int) -> None:
        if (src, out_channel) in self.edges:
            raise TopologyError(src, f"output {out_channel} already wired")
        if (dst, in_channel) in self.edges.values():
            raise TopologyError(dst, f"input {in_channel} already wired")
        self.edges[(src, out_channel)] = (dst, in_channel)
        self._next = None

    def label_detector(self, label: int, tap_id: int) -> None:
        if self.devices[tap_id].kind != "tap":
            raise TopologyError(tap_id, "only taps can be labeled as counters")
        self.detectors[label] = tap_id
        self._next = None

    def validate(self) -> None:
        """Check single source, port uniqueness and acyclicity."""
        if self.source_id is None:
            raise TopologyError(-1, "network has no source")
        targets = list(self.edges.values())
        if len(set(targets)) != len(targets):
            raise TopologyError(-1, "an input port has more than one incoming edge")
        for (dst, _) in targets:
            if dst == self.source_id:
                raise TopologyError(dst, "the source cannot receive events")
        state: dict[int, int] = {}

        def visit(node: int) -> None:
            state[node] = 1
            for ch in (0, 1):
                nxt = self.edges.get((node, ch))
                if nxt is None:
                    continue
                if state.get(nxt[0]) == 1:
                    raise TopologyError(nxt[0], "cycle in device graph")
                if nxt[0] not in state:
                    visit(nxt[0])
            state[node] = 2

        visit(self.source_id)

    def _wire(self) -> list:
        table = [[self.edges.get((i, 0)), self.edges.get((i, 1))] for i in range(len(self.devices))]
        self._labels = {tid: label for label, tid in self.detectors.items()}
        self._next = table
        return table

    def enable_trace(self, out: TextIO | None = None) -> None:
        """Record hops of every event; print them to ``out`` when given."""
        self.trace = out if out is not None else _NullWriter()

    def propagate(self) -> Detection:
        """Send one source event through the network; return where it landed."""
        table = self._next if self._next is not None else self._wire()
        devices = self.devices
        stream = self.stream
        seq = self.sequence
        self.sequence = seq + 1
        dev = self.source_id
        ch, msg = devices[dev].emit(stream)
        hops = [Hop(dev, None, ch, msg)] if self.trace is not None else None
        while True:
            nxt = table[dev][ch]
            if nxt is None:
                if devices[dev].kind != "tap":
                    raise TopologyError(dev, f"output {ch} is not connected")
                break
            dev, in_ch = nxt
            ch, msg = devices[dev].receive(in_ch, msg, stream)
            if hops is not None:
                hops.append(Hop(dev, in_ch, ch, msg))
        if hops is not None:
            self.last_trace = hops
            write_trace(self.trace, seq, hops)
        return Detection(self._labels.get(dev, -1), msg)

    def run(self, n_events: int) -> None:
        propagate = self.propagate
        for _ in range(n_events):
            propagate()

    def counts(self) -> dict[int, int]:
        """Event count per labeled detector."""
        return {label: self.devices[tid].counters.total for label, tid in sorted(self.detectors.items())}

    def of_kind(self, kind: str) -> list:
        return [d for d in self.devices if d.kind == kind]

    @property
    def source(self) -> Source:
        return self.devices[self.source_id]


class _NullWriter:
    def write(self, s: str) -> int:
        return 0


def write_trace(out: TextIO, seq: int, hops: list[Hop]) -> None:
    for h in hops:
        in_ch = "-" if h.in_channel is None else h.in_channel
        out.write(f"event={seq} device={h.device} in={in_ch} out={h.out_channel}\n")


@dataclass
class NetworkConfig:
    alpha: float = 0.98
    source: SourceConfig = field(default_factory=SourceConfig)
    phi0_deg: float = 0.0
    phi1_deg: float = 0.0
    literal_select: bool = False

    def __post_init__(self):
        check_alpha(self.alpha)


def _as_stream(stream: RandomStream | int) -> RandomStream:
    return stream if isinstance(stream, RandomStream) else RandomStream(stream)


def build_beam_splitter_network(cfg: NetworkConfig, stream: RandomStream | int) -> Network:
    """Source -> one learning beam splitter -> terminal taps N0, N1."""
    if not isinstance(cfg, NetworkConfig):
        raise ConfigError("config", "expected a NetworkConfig")
    net = Network(_as_stream(stream))
    src = net.add(Source(cfg.source))
    bs = net.add(StochasticBeamSplitter(cfg.alpha, net.stream, cfg.literal_select))
    t0 = net.add(Tap("N0"))
    t1 = net.add(Tap("N1"))
    net.connect(src, 0, bs, 0)
    net.connect(src, 1, bs, 1)
    net.connect(bs, 0, t0, 0)
    net.connect(bs, 1, t1, 1)
    net.label_detector(0, t0)
    net.label_detector(1, t1)
    net.validate()
    return net


def build_mzi_network(cfg: NetworkConfig, stream: RandomStream | int) -> Network:
    """Mach-Zehnder layout with arm counters placed before the phase shifters.

    source -> BS1; BS1 out 0 -> N0 -> R(phi0) -> BS2 in 0;
    BS1 out 1 -> N1 -> R(phi1) -> BS2 in 1; BS2 outs -> N2, N3.
    The first splitter is initialized before the second.
    """
    if not isinstance(cfg, NetworkConfig):
        raise ConfigError("config", "expected a NetworkConfig")
    net = Network(_as_stream(stream))
    src = net.add(Source(cfg.source))
    bs1 = net.add(StochasticBeamSplitter(cfg.alpha, net.stream, cfg.literal_select))
    bs2 = net.add(StochasticBeamSplitter(cfg.alpha, net.stream, cfg.literal_select))
    r0 = net.add(PhaseShifter(cfg.phi0_deg))
    r1 = net.add(PhaseShifter(cfg.phi1_deg))
    taps = [net.add(Tap(f"N{i}")) for i in range(4)]
    net.connect(src, 0, bs1, 0)
    net.connect(src, 1, bs1, 1)
    net.connect(bs1, 0, taps[0], 0)
    net.connect(taps[0], 0, r0, 0)
    net.connect(r0, 0, bs2, 0)
    net.connect(bs1, 1, taps[1], 1)
    net.connect(taps[1], 1, r1, 1)
    net.connect(r1, 1, bs2, 1)
    net.connect(bs2, 0, taps[2], 0)
    net.connect(bs2, 1, taps[3], 1)
    for i, t in enumerate(taps):
        net.label_detector(i, t)
    net.validate()
    return net

