from __future__ import annotations

from collections.abc import Callable, Iterable
from pathlib import Path
from typing import Generic, TypeVar


class Invalid(Exception):
    pass


T = TypeVar("T")
Number = TypeVar("Number", int, float)

S = TypeVar("S", bound="ValidatorBuilder")


# ------------------------------------------------------------
# Core pipeline
# ------------------------------------------------------------
class ValidatorBuilder(Generic[T]):
    """A chainable validator that compiles to a single function.

    The pipeline looks like:  str -> parser -> (zero+ transforms) -> checks -> T

    Every builder carries the name of the value it validates so that failure
    messages read the same whether they come from a config file or a flag
    (``"tau must be ≥ 0"``).

    Call .build() to get the final function:  (str) -> T
    """

    def __init__(self, name: str, parser: Callable[[str], T] | None = None):
        self.name = name
        self._parser: Callable[[str], T] = parser or (lambda s: s)  # type: ignore
        self._transforms: list[Callable[[T], T]] = []
        self._checks: list[Callable[[T], None]] = []

    # ---- pipeline primitives ----
    def transform(self: S, fn: Callable[[T], T]) -> S:
        self._transforms.append(fn)
        return self

    def check(self: S, predicate: Callable[[T], bool], message: str) -> S:
        def _c(v: T) -> None:
            if not predicate(v):
                raise Invalid(message)

        self._checks.append(_c)
        return self

    def build(self) -> Callable[[str], T]:
        def _f(s: str) -> T:
            v = self._parser(s)
            for tr in self._transforms:
                v = tr(v)
            for chk in self._checks:
                chk(v)
            return v

        return _f

    # --------------------------------------------------------
    # Factories
    # --------------------------------------------------------
    @classmethod
    def string(cls, name: str) -> StringBuilder:
        return StringBuilder(name)

    @classmethod
    def integer(cls, name: str) -> NumberBuilder[int]:
        return NumberBuilder(name, _parse_integer, kind_name="an integer")

    @classmethod
    def floating(cls, name: str) -> NumberBuilder[float]:
        return NumberBuilder(name, float, kind_name="a number")

    @classmethod
    def path(cls, name: str) -> PathBuilder:
        return PathBuilder(name)


def _parse_integer(s: str) -> int:
    # "3.0" from a config file is accepted, "3.5" is not
    value = float(s)
    if not value.is_integer():
        raise ValueError(s)
    return int(value)


# ------------------------------------------------------------
# StringBuilder
# ------------------------------------------------------------
class StringBuilder(ValidatorBuilder[str]):
    def __init__(self, name: str):
        def _parse(s) -> str:
            if not isinstance(s, str):
                raise Invalid(f"{name} should be a string")
            return s

        super().__init__(name, parser=_parse)

    def strip(self) -> StringBuilder:
        return self.transform(lambda s: s.strip())

    def lower(self) -> StringBuilder:
        return self.transform(lambda s: s.lower())

    def one_of(self, options: Iterable[str]) -> StringBuilder:
        opts = set(options)
        formatted = ", ".join(repr(choice) for choice in sorted(opts))
        return self.check(lambda s: s in opts, f"{self.name} must be one of: {formatted}")


# ------------------------------------------------------------
# NumberBuilder
# ------------------------------------------------------------
class NumberBuilder(ValidatorBuilder[Number], Generic[Number]):
    def __init__(self, name: str, caster: Callable[[str], Number], *, kind_name: str):
        def _parse(s: str) -> Number:
            try:
                return caster(s.strip())
            except Exception as e:
                raise Invalid(f"{name} must be {kind_name}") from e

        super().__init__(name, parser=_parse)  # type: ignore[arg-type]

    def min(self, lo: Number) -> NumberBuilder[Number]:
        return self.check(lambda n: n >= lo, f"{self.name} must be ≥ {lo}")

    def max(self, hi: Number) -> NumberBuilder[Number]:
        return self.check(lambda n: n <= hi, f"{self.name} must be ≤ {hi}")

    def positive(self) -> NumberBuilder[Number]:
        return self.check(lambda n: n > 0, f"{self.name} must be > 0")

    def finite(self) -> NumberBuilder[Number]:
        return self.check(
            lambda n: n == n and abs(n) != float("inf"), f"{self.name} must be finite"
        )

    def multiple_of(self, step: int) -> NumberBuilder[Number]:
        return self.check(lambda n: n % step == 0, f"{self.name} must be a multiple of {step}")

    def equals(self, expected: Number) -> NumberBuilder[Number]:
        return self.check(lambda n: n == expected, f"{self.name} is fixed at {expected}")


# ------------------------------------------------------------
# Path (string)
# ------------------------------------------------------------
class PathBuilder(ValidatorBuilder[str]):
    def __init__(self, name: str):
        super().__init__(name, parser=lambda s: s.strip())

    def must_exist(self) -> PathBuilder:
        return self.check(lambda p: Path(p).exists(), f"{self.name} does not exist")

    def must_be_file(self) -> PathBuilder:
        return self.check(lambda p: Path(p).is_file(), f"{self.name} is not a file")

    def must_be_dir(self) -> PathBuilder:
        return self.check(lambda p: Path(p).is_dir(), f"{self.name} is not a directory")

    def normalize(self) -> PathBuilder:
        """Expand `~` and return absolute real path."""
        return self.transform(lambda p: str(Path(p).expanduser().resolve()))
