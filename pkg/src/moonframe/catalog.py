"""Fixtures, file I/O, and machine-readable verification reports.

No fixture is trusted: every loader re-verifies the payload from scratch,
so a corrupted file fails loudly rather than poisoning the pipeline.
Discovery records (frames or codes found by search) are written alongside
a meta file carrying the seed and budget so runs can be replayed.
"""

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import FixtureError
from .lattice import Frame
from .zkcode import BinaryCode, ZkCode, verify_type_ii

REPORT_SCHEMA = 1


def _fixture_text(name):
    ref = resources.files("moonframe") / "fixtures" / name
    try:
        return ref.read_text(encoding="ascii")
    except (FileNotFoundError, ModuleNotFoundError) as exc:
        raise FixtureError(f"fixture {name} is missing: {exc}") from None


def golay_fixture():
    """The extended binary Golay code, re-verified on every load."""
    text = _fixture_text("golay24.txt")
    rows = []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        if set(ln) - {"0", "1"}:
            raise FixtureError("golay fixture must be rows of 0/1 digits")
        rows.append([int(ch) for ch in ln])
    if len(rows) != 12 or any(len(r) != 24 for r in rows):
        raise FixtureError("golay fixture must be a 12x24 matrix")
    code = BinaryCode.from_rows(rows)
    if code.dim != 12:
        raise FixtureError("golay fixture rows are not independent")
    if code.dual() != code:
        raise FixtureError("golay fixture is not self-dual")
    if not code.is_doubly_even():
        raise FixtureError("golay fixture is not doubly even")
    if code.min_weight() != 8:
        raise FixtureError("golay fixture minimum weight is not 8")
    return code


# -- constructive frames --------------------------------------------------------


def hadamard12():
    """A Hadamard matrix of order 12 (Paley construction over GF(11))."""
    q = 11
    chi = {0: 0}
    squares = {x * x % q for x in range(1, q)}
    for t in range(1, q):
        chi[t] = 1 if t in squares else -1
    h = [[0] * 12 for _ in range(12)]
    h[0][0] = 1
    for j in range(1, 12):
        h[0][j] = 1
        h[j][0] = -1
    for i in range(1, 12):
        for j in range(1, 12):
            h[i][j] = 1 if i == j else chi[(i - j) % q]
    for i, row in enumerate(h):
        for j in range(i + 1, 12):
            if sum(x * y for x, y in zip(row, h[j])):
                raise FixtureError("Hadamard-12 construction failed")
    return h


def golay_dodecad_pair(golay):
    """Complementary weight-12 Golay supports, as sorted position lists."""
    octads = [w for w in golay.words() if bin(w).count("1") == 8]
    first = octads[0]
    for w in octads[1:]:
        if bin(first & w).count("1") == 2:
            dodecad = first ^ w
            break
    else:
        raise FixtureError("no dodecad found; fixture is not the Golay code")
    comp = dodecad ^ ((1 << 24) - 1)
    s = [i for i in range(24) if (dodecad >> i) & 1]
    t = [i for i in range(24) if (comp >> i) & 1]
    return s, t


def builtin_frame(k, golay=None):
    """A deterministic 2k-frame of the standard Leech coordinates.

    k=2: the pair frame 4(e_{2i} +- e_{2i+1}).
    k=3: +-2 sign patterns from Hadamard-12 rows on two complementary
         Golay dodecad supports.
    k=4: the coordinate frame 8 e_i.
    These serve as documented fallbacks for the randomized search; they
    are verified against the lattice by the caller like any other frame.
    """
    if k == 2:
        vectors = []
        for i in range(12):
            for sign in (1, -1):
                row = [0] * 24
                row[2 * i] = 4
                row[2 * i + 1] = 4 * sign
                vectors.append(row)
        return Frame(vectors, 2)
    if k == 3:
        if golay is None:
            golay = golay_fixture()
        h = hadamard12()
        s, t = golay_dodecad_pair(golay)
        vectors = []
        for support in (s, t):
            for r in range(12):
                row = [0] * 24
                for j, pos in enumerate(support):
                    row[pos] = 2 * h[r][j]
                vectors.append(row)
        return Frame(vectors, 3)
    if k == 4:
        return Frame([[8 if j == i else 0 for j in range(24)]
                      for i in range(24)], 4)
    raise ValueError(f"no builtin frame for k={k}")


# -- discovery records -----------------------------------------------------------


def frame_fixture(name, lat):
    """Load a shipped frame fixture and verify it against the lattice."""
    frame = Frame.from_text(_fixture_text(f"frames/{name}.txt"))
    try:
        frame.verify(lat)
    except Exception as exc:
        raise FixtureError(f"frame fixture {name} failed verification: {exc}")
    return frame


def frame_fixture_meta(name):
    return json.loads(_fixture_text(f"frames/{name}.meta.json"))


def store_discovery(obj, directory, name, seed=None, budget_used=None,
                    lattice=None, notes=None):
    """Persist a verified frame or code with a replayable meta record.

    The object is re-verified here; storing an unverified object is
    refused.  Returns the payload path.
    """
    directory = Path(directory)
    transcript = []
    if isinstance(obj, Frame):
        if lattice is None:
            raise ValueError("storing a frame needs the ambient lattice")
        obj.verify(lattice)
        transcript.append("frame: membership and Gram 2k*I verified")
        sub = directory / "frames"
        payload = obj.to_text()
        kind = "frame"
        k = obj.k
    elif isinstance(obj, ZkCode):
        rep = verify_type_ii(obj)
        if not rep.type_ii:
            raise ValueError(f"refusing to store unverified code: {rep}")
        transcript.append("code: self-dual and Type II verified")
        sub = directory / "codes"
        payload = obj.to_text()
        kind = "code"
        k = obj.modulus // 2
    else:
        raise TypeError(f"cannot store object of type {type(obj).__name__}")
    sub.mkdir(parents=True, exist_ok=True)
    path = sub / f"{name}.txt"
    path.write_text(payload, encoding="ascii")
    meta = {
        "schema": REPORT_SCHEMA,
        "kind": kind,
        "name": name,
        "k": k,
        "seed": seed,
        "budget_used_seconds": budget_used,
        "verification": transcript,
        "stored_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    if notes:
        meta["notes"] = notes
    (sub / f"{name}.meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="ascii")
    return path


# -- reports ----------------------------------------------------------------------


@dataclass
class CheckResult:
    check_name: str
    status: str  # "pass" | "fail" | "skip"
    witness: dict = field(default_factory=dict)
    exact_values: list = field(default_factory=list)

    @classmethod
    def ok(cls, name, **witness):
        return cls(name, "pass", dict(witness))

    @classmethod
    def fail(cls, name, **witness):
        return cls(name, "fail", dict(witness))


def _stringify(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_stringify(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _stringify(x) for k, x in v.items()}
    return str(v)


def emit_report(results):
    """Schema-stable JSON document; exact integers as decimal strings."""
    return {
        "schema": REPORT_SCHEMA,
        "checks": [
            {
                "check_name": r.check_name,
                "status": r.status,
                "witness": _stringify(r.witness),
                "exact_values": _stringify(list(r.exact_values)),
            }
            for r in results
        ],
    }


def report_passed(report):
    return all(c["status"] == "pass" for c in report["checks"])
