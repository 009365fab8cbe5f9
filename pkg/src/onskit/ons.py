"""EPC URI to ONS domain translation and NAPTR endpoint selection."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .epc_codec import EpcUri, parse_uri

log = logging.getLogger(__name__)

DEFAULT_SCHEME_LABEL = "sgtin"
DEFAULT_SUFFIX = "id.onsepc.com"
REGEXP_OPEN = "!.*$!"
REGEXP_CLOSE = "!"
SERVICE_PREFIX = "EPC+"

MAX_LABEL = 63
MAX_NAME = 253


class OnsError(ValueError):
    """Base error for ONS translation and record handling."""


class NotOnsNameError(OnsError):
    """Domain name does not have the expected ONS shape."""


class MalformedRegexpError(OnsError):
    """NAPTR regexp field lacks the ONS URL markers."""


class ServiceNotFoundError(OnsError):
    """No NAPTR record carries the requested service."""


@dataclass(frozen=True)
class OnsFqdn:
    """ONS query name: <item reference>.<company prefix>.<scheme>.<suffix>."""

    item_reference_text: str
    company_prefix_text: str
    scheme_label: str = DEFAULT_SCHEME_LABEL
    suffix: str = DEFAULT_SUFFIX

    def __post_init__(self) -> None:
        name = str(self)
        for label in name.split("."):
            if not 0 < len(label) <= MAX_LABEL:
                raise NotOnsNameError(f"label {label!r} violates DNS length limits")
        if len(name) > MAX_NAME:
            raise NotOnsNameError(f"name exceeds {MAX_NAME} octets: {name!r}")

    def __str__(self) -> str:
        return (
            f"{self.item_reference_text}.{self.company_prefix_text}"
            f".{self.scheme_label}.{self.suffix}"
        )


def uri_to_fqdn(uri: EpcUri | str) -> OnsFqdn:
    """Translate a sgtin URN into its ONS query name.

    Applies the standard steps: strip the urn:epc prefix, drop the serial
    number, invert the field order, turn ":" into "." and append the ONS
    suffix.
    """
    if isinstance(uri, str):
        fields = parse_uri(uri)
        from .epc_codec import fields_to_uri

        uri = fields_to_uri(fields)
    return OnsFqdn(
        item_reference_text=uri.item_reference_text,
        company_prefix_text=uri.company_prefix_text,
    )


def fqdn_to_identity(
    name: OnsFqdn | str,
    scheme_label: str = DEFAULT_SCHEME_LABEL,
    suffix: str = DEFAULT_SUFFIX,
) -> tuple[str, str, str]:
    """Recover (company prefix, item reference, scheme) from an ONS name.

    The serial number never reaches the ONS query, so this is the complete
    identity an observer of the name can extract.
    """
    text = str(name).rstrip(".")
    tail = f".{scheme_label}.{suffix}"
    if not text.lower().endswith(tail.lower()):
        raise NotOnsNameError(f"{text!r} does not end with {tail!r}")
    head = text[: -len(tail)]
    parts = head.split(".")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise NotOnsNameError(f"{text!r} lacks the <item>.<prefix> leading labels")
    ir_text, cp_text = parts
    return cp_text, ir_text, scheme_label


@dataclass(frozen=True)
class NaptrRecord:
    """One NAPTR resource record in presentation field order."""

    order: int
    preference: int
    flags: str
    service: str
    regexp: str
    replacement: str
    warnings: tuple[str, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class EpcisEndpoint:
    """EPCIS locator carried by a NAPTR record."""

    service_name: str
    url: str
    preference: int


def extract_url(regexp_field: str) -> str:
    """Return the URL between the "!.*$!" and "!" markers of a regexp field."""
    if not regexp_field.startswith(REGEXP_OPEN) or not regexp_field.endswith(REGEXP_CLOSE):
        raise MalformedRegexpError(f"missing URL markers: {regexp_field!r}")
    url = regexp_field[len(REGEXP_OPEN) : -len(REGEXP_CLOSE)]
    if not url:
        raise MalformedRegexpError(f"empty URL between markers: {regexp_field!r}")
    if REGEXP_CLOSE in url:
        # A raw "!" would have terminated the URL early, leaving trailing text.
        raise MalformedRegexpError(f"unescaped '!' inside URL: {regexp_field!r}")
    return url


def parse_naptr(
    order: int,
    preference: int,
    flags: str,
    service: str,
    regexp: str,
    replacement: str,
) -> NaptrRecord:
    """Validate NAPTR fields; ONS-shape deviations become warnings, not errors.

    A regexp without the URL markers is the one fatal case since the record
    then carries no endpoint at all.
    """
    extract_url(regexp)
    warnings = []
    if order != 0:
        warnings.append(f"order {order} != 0")
    if flags != "u":
        warnings.append(f"flags {flags!r} != 'u'")
    if replacement not in (".", ""):
        warnings.append(f"replacement {replacement!r} != '.'")
    if not service.startswith(SERVICE_PREFIX):
        warnings.append(f"service {service!r} lacks {SERVICE_PREFIX!r} prefix")
    return NaptrRecord(order, preference, flags, service, regexp, replacement, tuple(warnings))


def _service_name(record: NaptrRecord) -> str:
    if record.service.startswith(SERVICE_PREFIX):
        return record.service[len(SERVICE_PREFIX) :]
    return record.service


def select_endpoint(records: list[NaptrRecord], desired_service: str) -> EpcisEndpoint:
    """Pick the endpoint for a service, preferring the lowest preference value.

    Service names compare case-insensitively. Preference ties break on order,
    then on the URL text, so selection is deterministic.
    """
    wanted = desired_service.lower()
    matching = [r for r in records if _service_name(r).lower() == wanted]
    if not matching:
        raise ServiceNotFoundError(f"no NAPTR record offers service {desired_service!r}")
    best = min(matching, key=lambda r: (r.preference, r.order, extract_url(r.regexp)))
    return EpcisEndpoint(_service_name(best), extract_url(best.regexp), best.preference)


def all_endpoints(records: list[NaptrRecord]) -> list[EpcisEndpoint]:
    """Map every record to an endpoint, skipping malformed regexps with a warning."""
    endpoints = []
    for record in records:
        try:
            url = extract_url(record.regexp)
        except MalformedRegexpError as exc:
            log.warning("skipping NAPTR record: %s", exc)
            continue
        endpoints.append(EpcisEndpoint(_service_name(record), url, record.preference))
    endpoints.sort(key=lambda e: (e.service_name, e.preference, e.url))
    return endpoints
