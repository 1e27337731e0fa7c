"""Reading, writing and comparing OEIS b-files ("index value" per line)."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .arith import DomainError


def parse_bfile(text: str) -> list[tuple[int, int]]:
    terms = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise DomainError(f"b-file line {lineno}: expected 'index value', got {line!r}")
        try:
            terms.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise DomainError(f"b-file line {lineno}: non-integer field in {line!r}") from None
    return terms


def read_bfile(path: Path | str) -> list[tuple[int, int]]:
    return parse_bfile(Path(path).read_text())


def format_bfile(values, comment: str | None = None) -> str:
    head = "".join(f"# {c}\n" for c in comment.splitlines()) if comment else ""
    return head + "".join(f"{i} {v}\n" for i, v in enumerate(values, 1))


@dataclass(frozen=True)
class BfileComparison:
    ok: bool
    checked: int  # number of b-file terms compared
    last_index: int | None
    mismatch_index: int | None = None
    expected: int | None = None
    got: int | None = None

    def message(self) -> str:
        if self.ok:
            return f"OK through index {self.last_index}" if self.checked else "OK (no terms in range)"
        got = "missing" if self.got is None else self.got
        return f"first mismatch at index {self.mismatch_index}: b-file {self.expected}, computed {got}"

    def as_row(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "result": self.message(),
        }


def compare_bfile(terms: list[tuple[int, int]], computed: list[int], x: int) -> BfileComparison:
    """Compare b-file terms with value <= x against a computed listing.

    The b-file's own indices are used, so it may start at any offset relative
    to the computed list (index k of the file is matched with computed[k - i0]
    where i0 is its first index). A b-file shorter than the computed list is
    not a mismatch.
    """
    terms = sorted(terms)
    if not terms:
        return BfileComparison(True, 0, None)
    i0 = terms[0][0]
    checked = 0
    last = None
    for idx, val in terms:
        pos = idx - i0
        got = computed[pos] if pos < len(computed) else None
        if val > x:
            # beyond the computed range: the list must also stop here
            if got is not None and got <= x:
                return BfileComparison(False, checked, last, idx, val, got)
            break
        if got != val:
            return BfileComparison(False, checked, last, idx, val, got)
        checked += 1
        last = idx
    return BfileComparison(True, checked, last)
