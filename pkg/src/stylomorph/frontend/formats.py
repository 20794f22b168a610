"""printf/scanf format string handling, shared by the binder, the
interpreter and the printf<->cout rewrites.

Supported conversions: %d %lld %f %s %c, plus %% for a literal percent.
"""

from __future__ import annotations

SPECS = ("lld", "d", "f", "s", "c")


class FormatError(ValueError):
    pass


def parse_format(fmt: str) -> list[tuple[str, str]]:
    """Split a decoded format string into ("text", chunk) and
    ("spec", name) segments. Raises FormatError on unsupported
    conversions."""
    segments: list[tuple[str, str]] = []
    buf: list[str] = []
    i = 0
    while i < len(fmt):
        ch = fmt[i]
        if ch != "%":
            buf.append(ch)
            i += 1
            continue
        if fmt.startswith("%%", i):
            buf.append("%")
            i += 2
            continue
        for spec in SPECS:
            if fmt.startswith("%" + spec, i):
                if buf:
                    segments.append(("text", "".join(buf)))
                    buf.clear()
                segments.append(("spec", spec))
                i += 1 + len(spec)
                break
        else:
            raise FormatError(f"unsupported conversion at index {i}: "
                              f"{fmt[i:i + 4]!r}")
    if buf:
        segments.append(("text", "".join(buf)))
    return segments


def count_specs(segments: list[tuple[str, str]]) -> int:
    return sum(1 for kind, _ in segments if kind == "spec")
