"""Fourier symbols Q(i,j)(omega, k2; V) of the crack-face convolution matrix.

The dispersion relations consume these symbols through a provider contract
rather than fixed formulas.  Every provider honours three structural facts:

* positive homogeneity of degree 1:  Q(s*omega, s*k2) = s * Q(omega, k2)
  for s > 0;
* conjugate symmetry on real rays:  Q(-omega, -k2) = conj(Q(omega, k2)),
  because the space-time kernel is real;
* block structure: components (1,1), (1,2), (2,1), (2,2) form the coupled
  shear block, (3,3) is the scalar opening-mode symbol, and the remaining
  components vanish identically.

Three provider kinds exist.  ``synthetic`` builds each in-block component
as c*sqrt(v0^2 k2^2 - omega^2) + d*i*omega, which satisfies both contracts
for real c, d and positive v0 and is the workhorse for pipeline tests.
``tabulated`` interpolates values sampled on the unit circle of real rays
and reconstructs off-circle values by homogeneity; it cannot leave the
real (omega, k2) plane.  ``reference`` is a reserved slot for transcribed
closed forms and currently reports itself unavailable.

Branch convention: square roots are principal-branch; a real omega outside
the sonic cone (|omega| > v0 |k2|) is treated as the boundary value from
Im(omega) < 0, i.e. sqrt -> +i*sign(omega)*sqrt|.|.  This is what makes the
synthetic symbols conjugate-symmetric on the whole real axis and matches
the e^{i(k2 x2 - omega t)} transform convention used by the dispersion
module (decay means Im(omega) < 0).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .elastodyn import MaterialParams
from .errors import CapabilityError, DomainError, ReferenceKernelUnavailable, TableFormatError

COMPONENT_ORDER: tuple[tuple[int, int], ...] = ((1, 1), (1, 2), (2, 1), (2, 2), (3, 3))
_COMPONENT_LABELS = {c: f"Q{c[0]}{c[1]}" for c in COMPONENT_ORDER}
_LABEL_TO_COMPONENT = {v: k for k, v in _COMPONENT_LABELS.items()}
_OFF_BLOCK = {(1, 3), (3, 1), (2, 3), (3, 2)}

MIN_TABLE_ANGLES = 64


def radiating_sqrt(z: complex, omega: complex) -> complex:
    """Principal sqrt of z = v0^2 k2^2 - omega^2 with the real-axis branch fix.

    For exactly real omega the value is the limit from Im(omega) < 0: the
    naive principal branch already gives +i*sqrt|z| for omega > 0, and the
    sign is flipped for omega < 0 so that conjugate symmetry holds.
    """
    s = cmath.sqrt(z)
    if omega.imag == 0.0 and z.real < 0.0 and omega.real < 0.0:
        s = -s
    return s


@dataclass(frozen=True)
class SyntheticParams:
    """Per-component (c, d, v0) coefficients of the synthetic symbols."""

    q11: tuple[float, float, float] = (0.0, 0.0, 1.0)
    q12: tuple[float, float, float] = (0.0, 0.0, 1.0)
    q21: tuple[float, float, float] = (0.0, 0.0, 1.0)
    q22: tuple[float, float, float] = (0.0, 0.0, 1.0)
    q33: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def for_component(self, component: tuple[int, int]) -> tuple[float, float, float]:
        return getattr(self, _COMPONENT_LABELS[component].lower())

    def validate(self) -> None:
        for comp in COMPONENT_ORDER:
            c, d, v0 = self.for_component(comp)
            if not all(math.isfinite(x) for x in (c, d, v0)):
                raise DomainError(f"non-finite synthetic coefficients for {_COMPONENT_LABELS[comp]}")
            if v0 <= 0.0:
                raise DomainError(
                    f"synthetic branch speed must be positive for {_COMPONENT_LABELS[comp]}, got {v0}"
                )


@dataclass(frozen=True)
class KernelProvider:
    """Common provider surface; concrete kinds implement ``_component``."""

    material: MaterialParams | None = None
    V: float | None = None

    kind = "abstract"
    capability = "real-ray"

    def _component(self, component, omega, k2):
        raise NotImplementedError

    def with_speed(self, V: float) -> "KernelProvider":
        """Clone for another crack speed, where that is meaningful."""
        raise CapabilityError(f"{self.kind} provider cannot be rebuilt at a new speed")


@dataclass(frozen=True)
class SyntheticKernelProvider(KernelProvider):
    params: SyntheticParams = field(default_factory=SyntheticParams)

    kind = "synthetic"
    capability = "complex-plane"

    def _component(self, component, omega, k2):
        c, d, v0 = self.params.for_component(component)
        z = v0 * v0 * k2 * k2 - omega * omega
        return c * radiating_sqrt(z, omega) + d * 1j * omega

    def with_speed(self, V: float) -> "SyntheticKernelProvider":
        return replace(self, V=V)


def make_synthetic(
    params: SyntheticParams | dict | None = None,
    material: MaterialParams | None = None,
    V: float | None = None,
) -> SyntheticKernelProvider:
    """Build a complex-plane-capable synthetic provider.

    ``params`` may be a :class:`SyntheticParams` or a mapping with keys
    "Q11".."Q33" (missing components default to the zero symbol).
    """
    if params is None:
        params = SyntheticParams()
    elif isinstance(params, dict):
        kwargs = {}
        for key, triple in params.items():
            label = key if isinstance(key, str) else _COMPONENT_LABELS.get(tuple(key), None)
            if label is None or label.upper() not in _LABEL_TO_COMPONENT:
                raise DomainError(f"unknown synthetic component {key!r}")
            vals = tuple(float(x) for x in triple)
            if len(vals) != 3:
                raise DomainError(f"component {label} needs (c, d, v0), got {triple!r}")
            kwargs[label.lower()] = vals
        params = SyntheticParams(**kwargs)
    params.validate()
    return SyntheticKernelProvider(material=material, V=V, params=params)


@dataclass(frozen=True)
class KernelTable:
    """Sampled symbols on the unit circle of real rays, theta in [0, pi).

    ``theta = atan2(omega, k2)``; each entry array holds the complex value
    of one component at unit radius.  Rays with theta outside the stored
    span (including the whole (-pi, 0) half) are served through conjugate
    symmetry, so the angular domain closes on itself with a conjugation
    twist at pi.
    """

    nu: float
    V_over_b: float
    angles: np.ndarray
    entries: dict  # component tuple -> complex ndarray

    def validate(self) -> None:
        ang = np.asarray(self.angles, dtype=float)
        if ang.ndim != 1 or ang.size < MIN_TABLE_ANGLES:
            raise TableFormatError(
                f"kernel table needs at least {MIN_TABLE_ANGLES} angles, got {ang.size}"
            )
        if not (np.all(np.diff(ang) > 0.0)):
            raise TableFormatError("kernel table angles must be strictly increasing")
        if ang[0] < 0.0 or ang[-1] >= math.pi:
            raise TableFormatError("kernel table angles must lie in [0, pi)")
        if set(self.entries) != set(COMPONENT_ORDER):
            missing = sorted(_COMPONENT_LABELS[c] for c in set(COMPONENT_ORDER) - set(self.entries))
            raise TableFormatError(f"kernel table missing components: {', '.join(missing)}")
        for comp, vals in self.entries.items():
            v = np.asarray(vals)
            if v.shape != ang.shape:
                raise TableFormatError(f"entry length mismatch for {_COMPONENT_LABELS[comp]}")
            if not np.all(np.isfinite(v)):
                raise TableFormatError(f"non-finite entries for {_COMPONENT_LABELS[comp]}")

    def interp_unit(self, component: tuple[int, int], theta: float) -> complex:
        """Linear interpolation at unit radius for theta in [0, pi)."""
        ang = self.angles
        vals = self.entries[component]
        if ang[0] <= theta <= ang[-1]:
            return complex(
                np.interp(theta, ang, vals.real), np.interp(theta, ang, vals.imag)
            )
        # Wrap-around segment joining (theta_max, v_max) to (theta_0 + pi,
        # conj(v_0)); queries below theta_0 land on its mirror image.
        if theta > ang[-1]:
            t0, v0 = ang[-1], vals[-1]
            t1, v1 = ang[0] + math.pi, np.conj(vals[0])
            w = (theta - t0) / (t1 - t0)
            return complex(v0 * (1.0 - w) + v1 * w)
        t0, v0 = ang[-1] - math.pi, np.conj(vals[-1])
        t1, v1 = ang[0], vals[0]
        w = (theta - t0) / (t1 - t0)
        return complex(v0 * (1.0 - w) + v1 * w)

    def write(self, path) -> None:
        """Serialize in the single-document text format (17 sig. digits)."""
        lines = [f"{self.nu:.17g}", f"{self.V_over_b:.17g}", str(self.angles.size)]
        for i, theta in enumerate(self.angles):
            row = [f"{theta:.17g}"]
            for comp in COMPONENT_ORDER:
                v = self.entries[comp][i]
                row.append(f"{v.real:.17g}")
                row.append(f"{v.imag:.17g}")
            lines.append(" ".join(row))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class TabulatedKernelProvider(KernelProvider):
    table: KernelTable = None

    kind = "tabulated"
    capability = "real-ray"

    def _component(self, component, omega, k2):
        x = omega.real
        r = math.hypot(x, k2)
        theta = math.atan2(x, k2)
        if 0.0 <= theta < math.pi:
            return r * self.table.interp_unit(component, theta)
        # Opposite half of the ray circle: conjugate symmetry.
        mate = theta + math.pi if theta < 0.0 else theta - math.pi
        return r * complex(np.conj(self.table.interp_unit(component, mate)))

    def with_speed(self, V: float) -> "TabulatedKernelProvider":
        b = self.material.b if self.material is not None else 1.0
        if abs(V / b - self.V / b) <= 1e-12:
            return self
        raise CapabilityError(
            f"tabulated kernel data was sampled at V/b={self.V / b:.6g} and cannot "
            f"be rebuilt at V/b={V / b:.6g}; retabulate from a closed-form provider"
        )


@dataclass(frozen=True)
class ReferenceKernelProvider(KernelProvider):
    kind = "reference"
    capability = "complex-plane"

    def _component(self, component, omega, k2):
        raise ReferenceKernelUnavailable(
            "closed-form kernel symbols are not bundled; transcribe them from the "
            "Movchan & Willis (1997) weight-function solution or use a synthetic/"
            "tabulated provider"
        )


def make_reference(material: MaterialParams | None = None, V: float | None = None):
    """Reserved provider slot; raises until the closed forms are transcribed."""
    raise ReferenceKernelUnavailable(
        "reference kernel symbols are not implemented; supply kind='synthetic' "
        "or kind='tabulated' instead"
    )


def qbar(provider: KernelProvider, component, omega, k2) -> complex:
    """Evaluate one symbol component at (omega, k2).

    Off-block components return exactly 0.  Real rays are legal for every
    provider; a nonzero Im(omega) requires complex-plane capability.
    Raises DomainError at the excluded origin (0, 0).
    """
    i, j = component
    if not (1 <= i <= 3 and 1 <= j <= 3):
        raise DomainError(f"component indices must be in 1..3, got {component!r}")
    if (i, j) in _OFF_BLOCK:
        return 0.0 + 0.0j
    omega = complex(omega)
    k2 = float(k2)
    if omega == 0 and k2 == 0.0:
        raise DomainError("kernel symbols are undefined at (omega, k2) = (0, 0)")
    if omega.imag != 0.0 and provider.capability != "complex-plane":
        raise CapabilityError(
            f"{provider.kind} provider serves real rays only; "
            f"got omega={omega} with nonzero imaginary part"
        )
    return complex(provider._component((i, j), omega, k2))


def tabulate(
    provider: KernelProvider,
    n_angles: int = 2048,
    nu: float | None = None,
    V_over_b: float | None = None,
) -> KernelTable:
    """Sample a provider on the unit ray circle into a KernelTable.

    Angles are uniform over [0, pi).  ``nu`` and ``V_over_b`` default to the
    provider's own metadata and must be given when that is absent.
    """
    if nu is None:
        if provider.material is None:
            raise DomainError("tabulate needs nu when the provider carries no material")
        nu = provider.material.nu
    if V_over_b is None:
        if provider.V is None or provider.material is None:
            raise DomainError("tabulate needs V_over_b when the provider carries no speed")
        V_over_b = provider.V / provider.material.b
    if n_angles < MIN_TABLE_ANGLES:
        raise DomainError(f"n_angles must be at least {MIN_TABLE_ANGLES}, got {n_angles}")
    angles = np.arange(n_angles) * (math.pi / n_angles)
    entries = {}
    for comp in COMPONENT_ORDER:
        vals = np.empty(n_angles, dtype=complex)
        for idx, theta in enumerate(angles):
            vals[idx] = qbar(provider, comp, math.sin(theta), math.cos(theta))
        entries[comp] = vals
    table = KernelTable(nu=float(nu), V_over_b=float(V_over_b), angles=angles, entries=entries)
    table.validate()
    return table


def load_table(path) -> TabulatedKernelProvider:
    """Read a KernelTable file and wrap it in a real-ray provider.

    Parse failures raise TableFormatError naming the offending line.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.readlines()
    lines = [(i + 1, s.strip()) for i, s in enumerate(raw) if s.strip()]
    if len(lines) < 3:
        raise TableFormatError(f"{path}: truncated kernel table")

    def parse_float(lineno, text, what):
        try:
            return float(text)
        except ValueError:
            raise TableFormatError(f"{path}:{lineno}: cannot parse {what} from {text!r}") from None

    nu = parse_float(lines[0][0], lines[0][1], "nu")
    v_over_b = parse_float(lines[1][0], lines[1][1], "V_over_b")
    try:
        count = int(lines[2][1])
    except ValueError:
        raise TableFormatError(
            f"{path}:{lines[2][0]}: cannot parse angle count from {lines[2][1]!r}"
        ) from None
    rows = lines[3:]
    if len(rows) != count:
        raise TableFormatError(
            f"{path}: expected {count} angle rows, found {len(rows)}"
        )
    angles = np.empty(count)
    entries = {comp: np.empty(count, dtype=complex) for comp in COMPONENT_ORDER}
    for r, (lineno, text) in enumerate(rows):
        fields = text.split()
        if len(fields) != 1 + 2 * len(COMPONENT_ORDER):
            raise TableFormatError(
                f"{path}:{lineno}: expected {1 + 2 * len(COMPONENT_ORDER)} fields, got {len(fields)}"
            )
        angles[r] = parse_float(lineno, fields[0], "angle")
        for ci, comp in enumerate(COMPONENT_ORDER):
            re = parse_float(lineno, fields[1 + 2 * ci], f"Re({_COMPONENT_LABELS[comp]})")
            im = parse_float(lineno, fields[2 + 2 * ci], f"Im({_COMPONENT_LABELS[comp]})")
            entries[comp][r] = complex(re, im)
    try:
        material = MaterialParams(nu=nu, b=1.0)
    except DomainError as exc:
        raise TableFormatError(f"{path}:{lines[0][0]}: {exc}") from None
    table = KernelTable(nu=nu, V_over_b=v_over_b, angles=angles, entries=entries)
    table.validate()
    return TabulatedKernelProvider(material=material, V=v_over_b, table=table)
