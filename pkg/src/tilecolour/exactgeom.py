"""Exact arithmetic over the ring Z[sqrt2][1/2] and exact plane geometry.

Every coordinate used by the tilings is a :class:`Scalar` ``(a + b*sqrt2) / 2**k``.
Python integers are unbounded, so arithmetic never wraps; the only failure
mode is running out of memory, which surfaces as ``MemoryError`` rather than a
silently wrong value.
"""
from __future__ import annotations

import enum
import math
from typing import Iterable, Optional, Sequence, Tuple, Union

__all__ = [
    "GeometryError",
    "Scalar",
    "Vec2",
    "Point",
    "Transform",
    "TurnClass",
    "TURN_SET",
    "as_scalar",
    "scalar_arithmetic",
    "scalar_compare",
    "transform_apply",
    "segment_relations",
    "direction_class",
    "rotation_classify",
    "polygon_area2",
    "SQRT2",
    "HALF_SQRT2",
]


class GeometryError(ValueError):
    """Raised for degenerate geometric input (zero vectors, degenerate segments)."""


def _two_adic(n: int) -> int:
    """Number of trailing zero bits of a nonzero integer."""
    return (n & -n).bit_length() - 1


class Scalar:
    """Exact value ``(a + b*sqrt2) / 2**k`` kept in canonical form.

    Canonical form: ``k >= 0`` and, when ``k > 0``, ``a`` and ``b`` are not both
    even.  Zero is ``(0, 0, 0)``.  Two scalars are equal exactly when their
    canonical triples are equal.
    """

    __slots__ = ("a", "b", "k")

    a: int
    b: int
    k: int

    def __init__(self, a: int = 0, b: int = 0, k: int = 0) -> None:
        a = int(a)
        b = int(b)
        k = int(k)
        if k < 0:
            a <<= -k
            b <<= -k
            k = 0
        if a == 0 and b == 0:
            k = 0
        elif k:
            shift = min(_two_adic(a | b), k)
            if shift:
                a >>= shift
                b >>= shift
                k -= shift
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Scalar is immutable")

    @classmethod
    def from_triple(cls, a: int, b: int, k: int) -> "Scalar":
        """Build from a triple that must already be canonical."""
        s = cls(a, b, k)
        if (s.a, s.b, s.k) != (a, b, k):
            raise ValueError(f"non-canonical scalar triple {(a, b, k)}")
        return s

    # -- conversions -------------------------------------------------
    @property
    def triple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.k)

    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self) -> float:
        return (self.a + self.b * math.sqrt(2.0)) / float(2 ** self.k)

    def __repr__(self) -> str:
        return f"Scalar({self.a}, {self.b}, {self.k})"

    def __str__(self) -> str:
        if self.b == 0:
            body = str(self.a)
        elif self.a == 0:
            body = f"{self.b}√2"
        else:
            body = f"({self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}√2)"
        return body if self.k == 0 else f"{body}/{2 ** self.k}"

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.k))

    def __reduce__(self):
        return (Scalar, (self.a, self.b, self.k))

    # -- ring operations ---------------------------------------------
    def __add__(self, other: "ScalarLike") -> "Scalar":
        o = as_scalar(other)
        if self.k == o.k:
            return Scalar(self.a + o.a, self.b + o.b, self.k)
        if self.k > o.k:
            d = self.k - o.k
            return Scalar(self.a + (o.a << d), self.b + (o.b << d), self.k)
        d = o.k - self.k
        return Scalar((self.a << d) + o.a, (self.b << d) + o.b, o.k)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.a, -self.b, self.k)

    def __sub__(self, other: "ScalarLike") -> "Scalar":
        return self + (-as_scalar(other))

    def __rsub__(self, other: "ScalarLike") -> "Scalar":
        return as_scalar(other) + (-self)

    def __mul__(self, other: "ScalarLike") -> "Scalar":
        o = as_scalar(other)
        return Scalar(self.a * o.a + 2 * self.b * o.b,
                      self.a * o.b + self.b * o.a,
                      self.k + o.k)

    __rmul__ = __mul__

    def conjugate(self) -> "Scalar":
        """Galois conjugate ``(a - b*sqrt2) / 2**k``."""
        return Scalar(self.a, -self.b, self.k)

    def norm(self) -> Tuple[int, int]:
        """Field norm as an exact fraction ``(numerator, 4**k)``."""
        return (self.a * self.a - 2 * self.b * self.b, 4 ** self.k)

    def half(self, times: int = 1) -> "Scalar":
        return Scalar(self.a, self.b, self.k + times)

    def div_exact(self, n: int) -> "Scalar":
        """Divide by an odd integer that divides both coefficients."""
        if n == 0:
            raise ZeroDivisionError("division by zero")
        if n % 2 == 0:
            raise ValueError("div_exact expects an odd divisor")
        if self.a % n or self.b % n:
            raise ArithmeticError(f"{self!r} is not divisible by {n}")
        return Scalar(self.a // n, self.b // n, self.k)

    # -- order -------------------------------------------------------
    def sign(self) -> int:
        a, b = self.a, self.b
        if a >= 0 and b >= 0:
            return 0 if (a == 0 and b == 0) else 1
        if a <= 0 and b <= 0:
            return -1
        # Opposite signs: compare a^2 with 2 b^2.
        lhs, rhs = a * a, 2 * b * b
        if a > 0:
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self.a == other.a and self.b == other.b and self.k == other.k
        if isinstance(other, int):
            return self.b == 0 and self.k == 0 and self.a == other
        return NotImplemented

    def __lt__(self, other: "ScalarLike") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "ScalarLike") -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: "ScalarLike") -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: "ScalarLike") -> bool:
        return (self - other).sign() >= 0

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __abs__(self) -> "Scalar":
        return -self if self.sign() < 0 else self

    # -- serialization -----------------------------------------------
    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "k": self.k}

    @classmethod
    def from_json(cls, obj: dict) -> "Scalar":
        if not isinstance(obj, dict) or set(obj) != {"a", "b", "k"}:
            raise ValueError(f"malformed scalar {obj!r}")
        a, b, k = obj["a"], obj["b"], obj["k"]
        if not isinstance(a, str) or not isinstance(b, str) or type(k) is not int:
            raise ValueError(f"malformed scalar {obj!r}")
        if k < 0:
            raise ValueError(f"negative exponent in scalar {obj!r}")
        return cls.from_triple(int(a), int(b), k)


ScalarLike = Union[Scalar, int]

ZERO = Scalar(0)
ONE = Scalar(1)
SQRT2 = Scalar(0, 1)
HALF_SQRT2 = Scalar(0, 1, 1)


def as_scalar(x: ScalarLike) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        return Scalar(x)
    raise TypeError(f"cannot interpret {x!r} as Scalar")


def scalar_arithmetic(x: Scalar, y: Optional[Scalar], op: str) -> Scalar:
    """Functional entry point: ``op`` is one of ``add``, ``sub``, ``mul``, ``neg``."""
    if op == "neg":
        return -x
    if y is None:
        raise ValueError(f"operation {op!r} needs two operands")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown scalar operation {op!r}")


def scalar_compare(x: ScalarLike, y: ScalarLike) -> int:
    """Return -1, 0 or 1 according to the exact sign of ``x - y``."""
    return (as_scalar(x) - as_scalar(y)).sign()


class Vec2:
    """Exact 2-vector with :class:`Scalar` components (also used for points)."""

    __slots__ = ("x", "y")

    x: Scalar
    y: Scalar

    def __init__(self, x: ScalarLike, y: ScalarLike) -> None:
        object.__setattr__(self, "x", as_scalar(x))
        object.__setattr__(self, "y", as_scalar(y))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Vec2 is immutable")

    def __reduce__(self):
        return (Vec2, (self.x, self.y))

    def __repr__(self) -> str:
        return f"Vec2({self.x}, {self.y})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vec2):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self) -> int:
        return hash((self.x, self.y))

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def scale(self, s: ScalarLike) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    def cross(self, other: "Vec2") -> Scalar:
        return self.x * other.y - self.y * other.x

    def dot(self, other: "Vec2") -> Scalar:
        return self.x * other.x + self.y * other.y

    def is_zero(self) -> bool:
        return not self.x and not self.y

    def sort_key(self) -> Tuple:
        return (self.x.k, self.x.a, self.x.b, self.y.k, self.y.a, self.y.b)

    def to_float(self) -> Tuple[float, float]:
        return (float(self.x), float(self.y))

    def to_json(self) -> list:
        return [self.x.to_json(), self.y.to_json()]

    @classmethod
    def from_json(cls, obj: list) -> "Vec2":
        if not isinstance(obj, list) or len(obj) != 2:
            raise ValueError(f"malformed point {obj!r}")
        return cls(Scalar.from_json(obj[0]), Scalar.from_json(obj[1]))


Point = Vec2

Matrix = Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]


def _matrix(m) -> Matrix:
    return ((as_scalar(m[0][0]), as_scalar(m[0][1])),
            (as_scalar(m[1][0]), as_scalar(m[1][1])))


class Transform:
    """Affine map ``p -> linear @ p + translation`` with exact entries."""

    __slots__ = ("linear", "translation")

    linear: Matrix
    translation: Vec2

    def __init__(self, linear, translation: Optional[Vec2] = None) -> None:
        object.__setattr__(self, "linear", _matrix(linear))
        object.__setattr__(self, "translation",
                           translation if translation is not None else Vec2(0, 0))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Transform is immutable")

    def __reduce__(self):
        return (Transform, (self.linear, self.translation))

    def __repr__(self) -> str:
        (a, b), (c, d) = self.linear
        return f"Transform([[{a}, {b}], [{c}, {d}]], {self.translation})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Transform):
            return NotImplemented
        return self.linear == other.linear and self.translation == other.translation

    def __hash__(self) -> int:
        return hash((self.linear, self.translation))

    # -- constructors ------------------------------------------------
    @classmethod
    def identity(cls) -> "Transform":
        return cls(((1, 0), (0, 1)))

    @classmethod
    def translate(cls, v: Vec2) -> "Transform":
        return cls(((1, 0), (0, 1)), v)

    @classmethod
    def scaling(cls, s: ScalarLike) -> "Transform":
        return cls(((s, 0), (0, s)))

    @classmethod
    def rotation45(cls, steps: int) -> "Transform":
        """Rotation by ``45 * steps`` degrees counterclockwise."""
        c, s = _COS_SIN_45[steps % 8]
        return cls(((c, -s), (s, c)))

    @classmethod
    def rotation90(cls, quarter_turns: int) -> "Transform":
        return cls.rotation45(2 * quarter_turns)

    @classmethod
    def reflect_x(cls) -> "Transform":
        """Reflection in the x axis, ``(x, y) -> (x, -y)``."""
        return cls(((1, 0), (0, -1)))

    # -- algebra -----------------------------------------------------
    def apply(self, p: Vec2) -> Vec2:
        (a, b), (c, d) = self.linear
        t = self.translation
        return Vec2(a * p.x + b * p.y + t.x, c * p.x + d * p.y + t.y)

    def apply_linear(self, v: Vec2) -> Vec2:
        (a, b), (c, d) = self.linear
        return Vec2(a * v.x + b * v.y, c * v.x + d * v.y)

    def compose(self, inner: "Transform") -> "Transform":
        """Return ``self ∘ inner`` (apply ``inner`` first)."""
        (a, b), (c, d) = self.linear
        (e, f), (g, h) = inner.linear
        lin = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        return Transform(lin, self.apply(inner.translation))

    def __matmul__(self, inner: "Transform") -> "Transform":
        return self.compose(inner)

    def det(self) -> Scalar:
        (a, b), (c, d) = self.linear
        return a * d - b * c

    def is_reflection(self) -> bool:
        return self.det().sign() < 0

    def scale_linear(self, s: ScalarLike) -> "Transform":
        (a, b), (c, d) = self.linear
        return Transform(((a * s, b * s), (c * s, d * s)), self.translation)

    def div_exact(self, n: int) -> "Transform":
        """Divide every entry (linear and translation) by an odd integer."""
        (a, b), (c, d) = self.linear
        t = self.translation
        return Transform(((a.div_exact(n), b.div_exact(n)), (c.div_exact(n), d.div_exact(n))),
                         Vec2(t.x.div_exact(n), t.y.div_exact(n)))

    def to_json(self) -> dict:
        (a, b), (c, d) = self.linear
        return {"linear": [[a.to_json(), b.to_json()], [c.to_json(), d.to_json()]],
                "translation": self.translation.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "Transform":
        if not isinstance(obj, dict) or set(obj) != {"linear", "translation"}:
            raise ValueError(f"malformed transform {obj!r}")
        lin = obj["linear"]
        if not isinstance(lin, list) or len(lin) != 2 or any(
                not isinstance(r, list) or len(r) != 2 for r in lin):
            raise ValueError(f"malformed linear part {lin!r}")
        return cls(tuple(tuple(Scalar.from_json(e) for e in row) for row in lin),
                   Vec2.from_json(obj["translation"]))


_COS_SIN_45 = [
    (ONE, ZERO), (HALF_SQRT2, HALF_SQRT2), (ZERO, ONE), (-HALF_SQRT2, HALF_SQRT2),
    (-ONE, ZERO), (-HALF_SQRT2, -HALF_SQRT2), (ZERO, -ONE), (HALF_SQRT2, -HALF_SQRT2),
]


def transform_apply(t: Transform, p: Vec2) -> Vec2:
    return t.apply(p)


def segment_relations(p: Vec2, s: Sequence[Vec2]) -> str:
    """Classify ``p`` against the closed segment ``s`` as off/endpoint/interior."""
    s0, s1 = s
    d = s1 - s0
    if d.is_zero():
        raise GeometryError("degenerate segment")
    if p == s0 or p == s1:
        return "endpoint"
    w = p - s0
    if d.cross(w):
        return "off"
    t = d.dot(w)
    if t.sign() > 0 and (d.dot(d) - t).sign() > 0:
        return "interior"
    return "off"


def direction_class(v: Vec2, directions: Sequence[Vec2]) -> Optional[int]:
    """Index of the unique direction parallel to ``v`` (either sense), or None."""
    if v.is_zero():
        raise GeometryError("zero vector has no direction")
    for j, u in enumerate(directions):
        if not u.cross(v):
            return j
    return None


def polygon_area2(points: Sequence[Vec2]) -> Scalar:
    """Twice the signed area (positive for counterclockwise polygons)."""
    total = ZERO
    n = len(points)
    for i in range(n):
        total = total + points[i].cross(points[(i + 1) % n])
    return total


class TurnClass(enum.Enum):
    """The twelve rational rotation classes at pinwheel vertices.

    Each value is ``(label, cos_num, sin_num, den)`` and encodes the exact
    rotation with cosine ``cos_num/den`` and sine ``sin_num/den``.  Here
    ``alpha = arctan(1/2)`` and ``beta = 90 - alpha``.
    """

    R0 = ("0", 1, 0, 1)
    R90 = ("90", 0, 1, 1)
    R180 = ("180", -1, 0, 1)
    R270 = ("270", 0, -1, 1)
    TWO_ALPHA = ("2a", 3, 4, 5)
    TWO_BETA = ("2b", -3, 4, 5)
    FOUR_ALPHA = ("4a", -7, 24, 25)
    FOUR_BETA = ("4b", -7, -24, 25)
    TWO_ALPHA_90 = ("2a+90", -4, 3, 5)
    TWO_BETA_90 = ("2b+90", -4, -3, 5)
    TWO_ALPHA_180 = ("2a+180", -3, -4, 5)
    TWO_BETA_180 = ("2b+180", 3, -4, 5)

    @property
    def label(self) -> str:
        return self.value[0]

    @property
    def degrees(self) -> float:
        _, c, s, _ = self.value
        return math.degrees(math.atan2(s, c)) % 360.0

    @property
    def is_turn(self) -> bool:
        return self in TURN_SET


TURN_SET = frozenset({
    TurnClass.R90, TurnClass.R270,
    TurnClass.TWO_ALPHA, TurnClass.TWO_BETA,
    TurnClass.TWO_ALPHA_180, TurnClass.TWO_BETA_180,
})


def _rational_pair(v: Vec2) -> Tuple[int, int]:
    """Integer pair proportional (positively) to a rational vector."""
    if v.x.b or v.y.b:
        raise GeometryError(f"rotation classes need rational vectors, got {v!r}")
    k = max(v.x.k, v.y.k)
    return (v.x.a << (k - v.x.k), v.y.a << (k - v.y.k))


def classify_int(d1: Tuple[int, int], d2: Tuple[int, int]) -> Optional[TurnClass]:
    """:func:`rotation_classify` on integer direction pairs."""
    x1, y1 = d1
    x2, y2 = d2
    for tc in _TURN_ORDER:
        _, c, s, _ = tc.value
        rx, ry = c * x1 - s * y1, s * x1 + c * y1
        if rx * y2 - ry * x2 == 0 and rx * x2 + ry * y2 > 0:
            return tc
    return None


_TURN_ORDER = tuple(TurnClass)


def rotation_classify(d1: Vec2, d2: Vec2) -> Optional[TurnClass]:
    """Class whose rotation R gives ``d2`` as a positive multiple of ``R d1``."""
    p1 = _rational_pair(d1)
    p2 = _rational_pair(d2)
    if p1 == (0, 0) or p2 == (0, 0):
        raise GeometryError("zero vector has no direction")
    return classify_int(p1, p2)


def vec(x: ScalarLike, y: ScalarLike) -> Vec2:
    return Vec2(x, y)


def points(pairs: Iterable[Tuple[ScalarLike, ScalarLike]]) -> list:
    return [Vec2(x, y) for x, y in pairs]
