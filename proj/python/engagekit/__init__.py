"""Instructor-agent configuration compiler and chat-transcript engagement analytics."""

from engagekit._core import *  # noqa: F401,F403
from engagekit._core import __version__  # noqa: F401
