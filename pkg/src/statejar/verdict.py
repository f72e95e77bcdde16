"""Decision values returned by domain validation and privacy policy checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional


class Outcome(str, enum.Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"
    PROMPT = "Prompt"


class Reason(str, enum.Enum):
    NOT_TAIL_MATCH = "NotTailMatch"
    TOO_BROAD = "TooBroad"
    TOO_MANY_LEVELS = "TooManyLevels"
    IP_HOST = "IpHost"
    INVALID_DOMAIN = "InvalidDomain"
    INVALID_PORT = "InvalidPort"
    THIRD_PARTY = "ThirdParty"
    NO_ORIGIN_COOKIE = "NoOriginCookie"
    COMMENT_URL_CONTEXT = "CommentUrlContext"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    reason: Optional[Reason] = None

    @property
    def accepted(self) -> bool:
        return self.outcome is Outcome.ACCEPT

    def __str__(self) -> str:
        if self.reason is None:
            return self.outcome.value
        return f"{self.outcome.value}({self.reason.value})"


ACCEPT = Verdict(Outcome.ACCEPT)
PROMPT = Verdict(Outcome.PROMPT)


def reject(reason: Reason) -> Verdict:
    return Verdict(Outcome.REJECT, reason)
