"""Registry of bundled schemes and loader for external SMS triples."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import _tables
from .coefficient import CoeffMatrix, ONE, ZERO
from .hm import HMRep
from .sms import parse_sms, read_sms


class SchemeId(enum.Enum):
    CONVENTIONAL = "conventional"
    STRASSEN = "strassen"
    WINOGRAD = "winograd"
    ACCURATE_SQRT3 = "accurate-sqrt3"
    POWERS = "powers"
    POWROT = "powrot"
    APPROX_0695 = "approx-0695"
    APPROX_0661 = "approx-0661"
    ALTBASIS_CORE = "altbasis-core"
    SMIRNOV336_ACCURATE = "smirnov336-accurate"

    @classmethod
    def parse(cls, name: str) -> "SchemeId":
        key = name.strip().lower().replace("_", "-")
        for s in cls:
            if s.value == key or key in _ALIASES.get(s, ()):
                return s
        raise KeyError(f"unknown scheme {name!r}")


_ALIASES = {
    SchemeId.CONVENTIONAL: ("classic", "classical"),
    SchemeId.ACCURATE_SQRT3: ("accurate", "222acc", "sqrt3"),
    SchemeId.SMIRNOV336_ACCURATE: ("336acc", "smirnov336"),
}

# matmul schemes that ship with the package (the sparse core is not one)
MATMUL_2X2 = (
    SchemeId.STRASSEN,
    SchemeId.WINOGRAD,
    SchemeId.ACCURATE_SQRT3,
    SchemeId.POWERS,
    SchemeId.POWROT,
    SchemeId.APPROX_0695,
    SchemeId.APPROX_0661,
)


@dataclass(frozen=True)
class External:
    """Scheme given by three SMS files."""

    L: str | Path
    R: str | Path
    P: str | Path
    name: str = "external"


def conventional(m: int = 2, k: int = 2, n: int = 2) -> HMRep:
    """Classical algorithm as an HM triple: one product a_ij * b_jl per (i, j, l)."""
    prods = [(i, j, l) for i in range(m) for j in range(k) for l in range(n)]
    r = len(prods)
    L = [[ONE if c == i * k + j else ZERO for c in range(m * k)] for i, j, l in prods]
    R = [[ONE if c == j * n + l else ZERO for c in range(k * n)] for i, j, l in prods]
    P = [[ONE if (i * n + l) == row else ZERO for i, j, l in prods] for row in range(m * n)]
    return HMRep(m, k, n, CoeffMatrix(L), CoeffMatrix(R), CoeffMatrix(P, r),
                 f"conventional{m}{k}{n}", "classical algorithm")


def _from_table(t: dict, name: str, provenance: str) -> HMRep:
    return HMRep(2, 2, 2, CoeffMatrix(t["L"]), CoeffMatrix(t["R"]), CoeffMatrix(t["P"]), name, provenance)


def _data_sms(fname: str) -> CoeffMatrix:
    return parse_sms(resources.files("fastmm").joinpath("data", fname).read_text(encoding="utf-8"))


def load_external(ext: External) -> HMRep:
    L, R, P = read_sms(ext.L), read_sms(ext.R), read_sms(ext.P)
    return hm_from_matrices(L, R, P, ext.name, f"SMS files {ext.L}, {ext.R}, {ext.P}")


def hm_from_matrices(L: CoeffMatrix, R: CoeffMatrix, P: CoeffMatrix, name: str = "", provenance: str = "") -> HMRep:
    """Infer (m, k, n) from the shapes of an HM triple."""
    r = L.rows
    if R.rows != r or P.cols != r:
        raise ValueError(f"rank mismatch: L has {L.rows} rows, R {R.rows} rows, P {P.cols} columns")
    mk, kn, mn = L.cols, R.cols, P.rows
    # mk*kn*mn = (mkn)^2
    mkn = math.isqrt(mk * kn * mn)
    if mkn * mkn != mk * kn * mn or mkn % kn or mkn % mk or mkn % mn:
        raise ValueError(f"incompatible shapes L {L.shape}, R {R.shape}, P {P.shape}")
    m, k, n = mkn // kn, mkn // mn, mkn // mk
    return HMRep(m, k, n, L, R, P, name, provenance)


def load_scheme(sid: SchemeId | External | str, dims: tuple[int, int, int] = (2, 2, 2)) -> HMRep:
    if isinstance(sid, External):
        return load_external(sid)
    if isinstance(sid, str):
        sid = SchemeId.parse(sid)
    if sid is SchemeId.CONVENTIONAL:
        return conventional(*dims)
    if sid is SchemeId.SMIRNOV336_ACCURATE:
        L, R, P = (_data_sms(f"smirnov336_accurate_{x}.sms") for x in "LRP")
        return HMRep(3, 3, 6, L, R, P, sid.value, "accurate <3,3,6> variant (diagonal isotropy of Smirnov's scheme)")
    table, prov = {
        SchemeId.STRASSEN: (_tables.STRASSEN, "Strassen 1969"),
        SchemeId.WINOGRAD: (_tables.WINOGRAD, "Winograd's 15-addition variant"),
        SchemeId.ACCURATE_SQRT3: (_tables.ACCURATE_SQRT3, "orbit optimum of Strassen, gamma2 = 16/sqrt3 + 2 sqrt2"),
        SchemeId.POWERS: (_tables.POWERS, "rational approximation with power-of-two denominators"),
        SchemeId.POWROT: (_tables.POWROT, "rotated rational approximation"),
        SchemeId.APPROX_0695: (_tables.APPROX_0695, "rational approximation, gamma2 ~ 12.0695"),
        SchemeId.APPROX_0661: (_tables.APPROX_0661, "rational approximation, gamma2 ~ 12.0661"),
        SchemeId.ALTBASIS_CORE: (_tables.ALTBASIS_CORE, "sparse core of the accurate scheme in an alternative basis"),
    }[sid]
    return _from_table(table, sid.value, prov)


def altbasis_cob() -> tuple[CoeffMatrix, CoeffMatrix, CoeffMatrix]:
    """(phi, psi, nu) such that the bundled core gives the accurate scheme via
    L = Ls phi, R = Rs psi, P = nu^T Ps."""
    t = _tables.ALTBASIS_COB
    return CoeffMatrix(t["phi"]), CoeffMatrix(t["psi"]), CoeffMatrix(t["nu"])


def bundled_matmul_schemes() -> list[HMRep]:
    """Every bundled scheme that is a genuine matrix multiplication."""
    out = [conventional(2, 2, 2)] + [load_scheme(s) for s in MATMUL_2X2]
    out.append(load_scheme(SchemeId.SMIRNOV336_ACCURATE))
    return out
