"""Language profiles: feature flags that license non-core constructs.

The core profile (all flags off) admits exactly classes, inheritance,
interfaces, object creation and method calls.
"""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class LanguageProfile:
    includes: bool = False
    include_in_interface: bool = False
    partial_classes: bool = False
    partial_interfaces: bool = False
    partial_method_override: bool = False
    aspects: bool = False

    def covers(self, other: "LanguageProfile") -> bool:
        """True if every flag enabled in `other` is enabled here."""
        return all(
            getattr(self, f.name) or not getattr(other, f.name)
            for f in fields(LanguageProfile)
        )


CORE_PROFILE = LanguageProfile()

PROFILE_FLAGS = tuple(f.name for f in fields(LanguageProfile))
