"""Third-party and unverifiable-transaction rules for accepting and sending cookies."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields
from typing import Optional

from .context import RequestContext, Trigger
from .headers import CookieSpec
from .matching import domain_match, reach
from .verdict import ACCEPT, PROMPT, Reason, Verdict, reject

__all__ = [
    "PrivacyMode",
    "PolicyConfig",
    "Transaction",
    "SendDecision",
    "classify_transaction",
    "is_third_party",
    "evaluate_accept",
    "evaluate_send",
    "explain_accept",
    "explain_send",
    "RequestContext",
    "Trigger",
]


class PrivacyMode(str, enum.Enum):
    # Cookies in unverifiable transactions only if the origin transaction
    # carried a cookie whose domain matches the new host.
    RFC2109_STRICT = "Rfc2109Strict"
    # Cookies in unverifiable transactions unless the host is outside the
    # origin host's reach.
    REACH_BASED = "ReachBased"


class Transaction(str, enum.Enum):
    VERIFIABLE = "Verifiable"
    UNVERIFIABLE = "Unverifiable"


class SendDecision(str, enum.Enum):
    ALLOW = "Allow"
    SUPPRESS = "Suppress"


_ALL_TRIGGERS = frozenset(Trigger)


@dataclass(frozen=True)
class PolicyConfig:
    mode: PrivacyMode = PrivacyMode.REACH_BASED
    third_party_override: bool = False
    prompt_enabled: bool = False
    comment_url_context: bool = False
    unverifiable_triggers: frozenset[Trigger] = field(default=_ALL_TRIGGERS)

    @classmethod
    def from_text(cls, text: str) -> "PolicyConfig":
        """Read flat ``key=value`` lines; ``#`` starts a comment."""
        values: dict[str, object] = {}
        names = {f.name for f in fields(cls)}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, raw = (part.strip() for part in line.partition("="))
            if not sep or key not in names:
                raise ValueError(f"line {lineno}: unknown policy setting {line!r}")
            if key == "mode":
                values[key] = _parse_mode(raw)
            elif key == "unverifiable_triggers":
                values[key] = frozenset(Trigger(t.strip()) for t in raw.split(",") if t.strip())
            else:
                values[key] = _parse_bool(raw, lineno)
        return cls(**values)  # type: ignore[arg-type]

    def to_text(self) -> str:
        triggers = ",".join(sorted(t.value for t in self.unverifiable_triggers))
        return (
            f"mode={self.mode.value}\n"
            f"third_party_override={str(self.third_party_override).lower()}\n"
            f"prompt_enabled={str(self.prompt_enabled).lower()}\n"
            f"comment_url_context={str(self.comment_url_context).lower()}\n"
            f"unverifiable_triggers={triggers}\n"
        )


def _parse_mode(raw: str) -> PrivacyMode:
    aliases = {"rfc2109": PrivacyMode.RFC2109_STRICT, "strict": PrivacyMode.RFC2109_STRICT, "reach": PrivacyMode.REACH_BASED}
    if raw.lower() in aliases:
        return aliases[raw.lower()]
    return PrivacyMode(raw)


def _parse_bool(raw: str, lineno: int) -> bool:
    lowered = raw.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"line {lineno}: not a boolean: {raw!r}")


def classify_transaction(
    ctx: RequestContext, unverifiable_triggers: frozenset[Trigger] = _ALL_TRIGGERS
) -> Transaction:
    if ctx.is_origin or ctx.trigger not in unverifiable_triggers:
        return Transaction.VERIFIABLE
    return Transaction.UNVERIFIABLE


def is_third_party(ctx: RequestContext) -> bool:
    if ctx.is_origin:
        raise ValueError("third-party status is only defined for derived transactions")
    return not domain_match(ctx.host, reach(ctx.origin_ctx.host))


def _unverifiable_gate(policy: PolicyConfig, ctx: RequestContext) -> tuple[Verdict, str]:
    """Verdict and rule tag for cookie traffic in ``ctx`` before any override."""
    if classify_transaction(ctx, policy.unverifiable_triggers) is Transaction.VERIFIABLE:
        return ACCEPT, "policy.verifiable"
    if policy.mode is PrivacyMode.REACH_BASED:
        return (reject(Reason.THIRD_PARTY) if is_third_party(ctx) else ACCEPT), "policy.reach"
    domains = ctx.origin_ctx.origin_cookie_domains
    if any(domain_match(ctx.host, d) for d in domains):
        return ACCEPT, "policy.strict"
    return reject(Reason.NO_ORIGIN_COOKIE), "policy.strict"


def explain_accept(policy: PolicyConfig, ctx: RequestContext) -> tuple[Verdict, str]:
    """Like :func:`evaluate_accept`, plus a tag naming the deciding rule."""
    if policy.comment_url_context:
        return reject(Reason.COMMENT_URL_CONTEXT), "policy.comment-url"
    verdict, tag = _unverifiable_gate(policy, ctx)
    if verdict.accepted:
        return verdict, tag
    if policy.third_party_override:
        return ACCEPT, "policy.override"
    if policy.prompt_enabled:
        return PROMPT, "policy.prompt"
    return verdict, tag


def evaluate_accept(
    policy: PolicyConfig, ctx: RequestContext, spec: Optional[CookieSpec] = None
) -> Verdict:
    """Decide whether a cookie received in ``ctx`` may be stored.

    Domain validation is separate (see :mod:`statejar.matching`); this only
    applies the transaction-level privacy rules.
    """
    return explain_accept(policy, ctx)[0]


def explain_send(policy: PolicyConfig, ctx: RequestContext) -> tuple[SendDecision, str]:
    if policy.comment_url_context:
        return SendDecision.SUPPRESS, "policy.comment-url"
    verdict, tag = _unverifiable_gate(policy, ctx)
    if verdict.accepted:
        return SendDecision.ALLOW, tag
    if policy.third_party_override:
        return SendDecision.ALLOW, "policy.override"
    return SendDecision.SUPPRESS, tag


def evaluate_send(policy: PolicyConfig, ctx: RequestContext) -> SendDecision:
    return explain_send(policy, ctx)[0]
