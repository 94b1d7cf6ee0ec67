"""weld: generate code for a small object language from class models and
integrate handwritten code through eight interchangeable strategies, with a
harness that scores each strategy against five criteria."""

__version__ = "0.1.0"

from .mechanisms import MECHANISM_ORDER, Mechanism, Workspace  # noqa: F401
from .minioop.profile import CORE_PROFILE, LanguageProfile  # noqa: F401
