"""Cookie state management for the Netscape (v0) and Set-Cookie2 (v1) mechanisms."""

from .context import RequestContext, Trigger
from .dates import format_http_date, parse_http_date
from .errors import CookieFileError, CookieSyntaxError, InvalidDate, ScriptError
from .headers import (
    CookieEntry,
    CookieRequestParse,
    CookieSpec,
    Mode,
    PortKind,
    PortSpec,
    parse_cookie_request,
    parse_set_cookie,
    serialize_cookie_header,
    serialize_set_cookie,
)
from .jar import FixedClock, Jar, StoredCookie, StoreOutcome, StoreResult
from .matching import (
    DomainPattern,
    HostName,
    domain_match,
    effective_host,
    path_match,
    port_match,
    reach,
    validate_domain_v0,
    validate_domain_v1,
)
from .policy import (
    PolicyConfig,
    PrivacyMode,
    SendDecision,
    Transaction,
    classify_transaction,
    evaluate_accept,
    evaluate_send,
    is_third_party,
)
from .verdict import Outcome, Reason, Verdict

__version__ = "0.1.0"

__all__ = [
    "RequestContext", "Trigger",
    "format_http_date", "parse_http_date",
    "CookieFileError", "CookieSyntaxError", "InvalidDate", "ScriptError",
    "CookieEntry", "CookieRequestParse", "CookieSpec", "Mode", "PortKind", "PortSpec",
    "parse_cookie_request", "parse_set_cookie", "serialize_cookie_header", "serialize_set_cookie",
    "FixedClock", "Jar", "StoredCookie", "StoreOutcome", "StoreResult",
    "DomainPattern", "HostName", "domain_match", "effective_host", "path_match", "port_match",
    "reach", "validate_domain_v0", "validate_domain_v1",
    "PolicyConfig", "PrivacyMode", "SendDecision", "Transaction",
    "classify_transaction", "evaluate_accept", "evaluate_send", "is_third_party",
    "Outcome", "Reason", "Verdict",
]
