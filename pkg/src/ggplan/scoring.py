"""Token-probability backends behind one scoring interface.

Backends implement ``score_completions(prompt, completions)`` and return,
for each completion, the per-token natural-log probabilities of its tokens
as a continuation of the prompt. All arithmetic stays in log space; the
product of token probabilities is only exponentiated at comparison time.
"""

from __future__ import annotations

import json
import math
import re
import threading
import urllib.error
import urllib.request
from collections import Counter
from dataclasses import dataclass

from .errors import BackendError, BackendUnavailableError

STUB_DEFAULT_PROB = 1e-6  # floor so no completion ever scores exactly 0
ORACLE_HIT_PROB = 0.9
ORACLE_MISS_PROB = 1e-4

_WORD_RE = re.compile(r"[a-z0-9']+")


def tokenize(text: str) -> list[str]:
    """Default backend tokenizer: lowercased word splitting."""
    return _WORD_RE.findall(text.lower())


class Vocabulary:
    """Thread-safe token-string to token-id interning table."""

    def __init__(self, tokens=()):
        self._ids: dict[str, int] = {}
        self._lock = threading.Lock()
        for tok in tokens:
            self.id_of(tok)

    def id_of(self, token: str) -> int:
        with self._lock:
            if token not in self._ids:
                self._ids[token] = len(self._ids)
            return self._ids[token]

    def __len__(self):
        return len(self._ids)


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[int, ...]
    surface: str


@dataclass(frozen=True)
class CompletionScore:
    completion: str
    token_logprobs: tuple[float, ...]

    @property
    def total_logprob(self) -> float:
        return math.fsum(self.token_logprobs)

    @property
    def mean_logprob(self) -> float:
        return self.total_logprob / len(self.token_logprobs)

    def probability(self, geometric_mean: bool = False) -> float:
        return math.exp(self.mean_logprob if geometric_mean else self.total_logprob)


class Backend:
    """Base class; subclasses are immutable after construction and safe to
    share across concurrent simulation runs."""

    name = "backend"

    def score_completions(self, prompt: str, completions: list[str]) -> list[CompletionScore]:
        raise NotImplementedError

    def encode(self, text: str) -> TokenSequence:
        vocab = getattr(self, "vocab", None) or Vocabulary()
        return TokenSequence(
            tokens=tuple(vocab.id_of(t) for t in tokenize(text)),
            surface=text,
        )


def _split_logprob(p: float, n_tokens: int) -> tuple[float, ...]:
    lp = math.log(p)
    return (lp / n_tokens,) * n_tokens


class StubBackend(Backend):
    """Table-driven stub: rules map a prompt suffix to per-completion
    probabilities; unmatched completions get the default floor."""

    name = "stub"

    def __init__(self, rules: dict[str, dict[str, float]] | None = None,
                 default: float = STUB_DEFAULT_PROB):
        self.rules = {k: dict(v) for k, v in (rules or {}).items()}
        self.default = float(default)
        self.vocab = Vocabulary()

    def _prob(self, prompt: str, completion: str) -> float:
        best_suffix = None
        for suffix, table in self.rules.items():
            if prompt.endswith(suffix) and completion in table:
                if best_suffix is None or len(suffix) > len(best_suffix):
                    best_suffix = suffix
        if best_suffix is None:
            return self.default
        return self.rules[best_suffix][completion]

    def score_completions(self, prompt, completions):
        out = []
        for c in completions:
            toks = tokenize(c)
            if not toks:
                raise BackendError(f"completion {c!r} tokenizes to nothing")
            out.append(CompletionScore(c, _split_logprob(self._prob(prompt, c), len(toks))))
        return out


class OracleNextRoomStub(Backend):
    """Stub that predicts the human's upcoming room from the narrated
    action history and a known occupancy trace.

    It recovers the narration's trailing item labels, locates the matching
    position in the completed-action log, takes the modal room of the next
    ``lookahead`` trace steps, and scores labels with at least one item in
    that room high and every other label low.
    """

    name = "stub:oracle-next-room"

    def __init__(self, smap, trace, lookahead: int = 25):
        from .semantic_map import assign_items_to_partitions

        self.lookahead = int(lookahead)
        assignment = assign_items_to_partitions(smap)
        part_room = {p.partition_id: p.room_index for p in smap.partitions}
        room_of_item = {iid: part_room[pid] for iid, pid in assignment.items()}

        self._labels_by_room: dict[int, frozenset[str]] = {}
        rooms_to_labels: dict[int, set[str]] = {}
        for it in smap.items:
            rooms_to_labels.setdefault(room_of_item[it.item_id], set()).add(it.label)
        self._labels_by_room = {r: frozenset(ls) for r, ls in rooms_to_labels.items()}

        known = sorted({it.label.lower() for it in smap.items}, key=len, reverse=True)
        self._label_re = re.compile(
            r"\b(" + "|".join(re.escape(l) for l in known) + r")\b") if known else None

        # Signature index: trailing narrated-label window -> earliest
        # completion time with that window.
        self._index: dict[tuple[str, ...], int] = {}
        narrated = [
            (t, action.item_refs[0][0].lower())
            for t, action in trace.completed
            if action.item_refs
        ]
        for k in range(len(narrated)):
            for w in range(1, 13):
                if k - w + 1 < 0:
                    break
                key = tuple(lbl for _, lbl in narrated[k - w + 1: k + 1])
                self._index.setdefault(key, narrated[k][0])
        self._rooms = trace.rooms
        self.vocab = Vocabulary()

    def _predict_room(self, prompt: str) -> int | None:
        if self._label_re is None:
            return None
        labels = tuple(self._label_re.findall(prompt.lower()))
        while labels:
            t = self._index.get(labels)
            if t is not None:
                end = min(t + self.lookahead, len(self._rooms) - 1)
                window = self._rooms[t + 1: end + 1] or self._rooms[t: t + 1]
                counts = Counter(window)
                top = max(counts.values())
                return min(r for r, c in counts.items() if c == top)
            labels = labels[1:]  # drop oldest and retry on a shorter window
        return None

    def score_completions(self, prompt, completions):
        room = self._predict_room(prompt)
        hot = self._labels_by_room.get(room, frozenset())
        out = []
        for c in completions:
            toks = tokenize(c)
            if not toks:
                raise BackendError(f"completion {c!r} tokenizes to nothing")
            p = ORACLE_HIT_PROB if c.lower() in hot else ORACLE_MISS_PROB
            out.append(CompletionScore(c, _split_logprob(p, len(toks))))
        return out


class NgramBackend(Backend):
    """Add-one-smoothed n-gram model over a plain-text corpus.

    Out-of-vocabulary tokens map to a reserved ``<unk>`` symbol so each
    context's distribution is a proper probability over the vocabulary.
    """

    name = "ngram"
    UNK = "<unk>"

    def __init__(self, corpus_text: str, order: int = 2):
        if order < 1:
            raise BackendError("n-gram order must be >= 1")
        self.order = order
        tokens = tokenize(corpus_text)
        if not tokens:
            raise BackendError("n-gram corpus is empty")
        self.vocabulary = sorted(set(tokens) | {self.UNK})
        self._vset = set(self.vocabulary)
        self.vocab = Vocabulary(self.vocabulary)

        self.ngram_counts: Counter = Counter()
        self.context_counts: Counter = Counter()
        for i in range(len(tokens)):
            ctx = tuple(tokens[max(0, i - order + 1): i])
            self.ngram_counts[ctx + (tokens[i],)] += 1
            self.context_counts[ctx] += 1

    @classmethod
    def from_file(cls, path, order: int = 2):
        try:
            with open(path, encoding="utf-8") as fh:
                return cls(fh.read(), order=order)
        except OSError as exc:
            raise BackendError(f"cannot read n-gram corpus {path}: {exc}") from exc

    def _norm(self, token: str) -> str:
        return token if token in self._vset else self.UNK

    def token_prob(self, context: tuple[str, ...], token: str) -> float:
        ctx = tuple(self._norm(t) for t in context[-(self.order - 1):] if self.order > 1)
        tok = self._norm(token)
        v = len(self.vocabulary)
        return (self.ngram_counts[ctx + (tok,)] + 1) / (self.context_counts[ctx] + v)

    def score_completions(self, prompt, completions):
        prompt_tokens = tuple(tokenize(prompt))
        out = []
        for c in completions:
            toks = tokenize(c)
            if not toks:
                raise BackendError(f"completion {c!r} tokenizes to nothing")
            logprobs = []
            prefix = prompt_tokens
            for tok in toks:
                logprobs.append(math.log(self.token_prob(prefix, tok)))
                prefix = prefix + (tok,)
            out.append(CompletionScore(c, tuple(logprobs)))
        return out


class RemoteBackend(Backend):
    """Client for the HTTP log-prob scoring protocol.

    POST /v1/score with ``{"prompt": str, "completions": [str]}`` returns
    ``{"results": [{"completion": str, "token_logprobs": [float]}]}``.
    """

    name = "remote"

    def __init__(self, url: str, timeout: float = 30.0, handshake: bool = True):
        self.url = url.rstrip("/")
        self.timeout = timeout
        if handshake:
            self.health()

    def _request(self, method, path, body=None):
        req = urllib.request.Request(
            self.url + path,
            data=None if body is None else json.dumps(body).encode("utf-8"),
            headers={"Content-Type": "application/json"},
            method=method,
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                if resp.status != 200:
                    raise BackendUnavailableError(
                        f"{self.url}{path} returned HTTP {resp.status}")
                return json.loads(resp.read().decode("utf-8"))
        except urllib.error.HTTPError as exc:
            raise BackendUnavailableError(
                f"{self.url}{path} returned HTTP {exc.code}") from exc
        except (urllib.error.URLError, TimeoutError, ConnectionError, OSError) as exc:
            raise BackendUnavailableError(
                f"cannot reach scoring backend at {self.url}: {exc}") from exc

    def health(self) -> dict:
        return self._request("GET", "/v1/health")

    def score_completions(self, prompt, completions):
        payload = {"prompt": prompt, "completions": list(completions)}
        data = self._request("POST", "/v1/score", payload)
        try:
            results = data["results"]
            return [
                CompletionScore(r["completion"], tuple(float(x) for x in r["token_logprobs"]))
                for r in results
            ]
        except (KeyError, TypeError) as exc:
            raise BackendUnavailableError(
                f"malformed response from {self.url}: {exc}") from exc


def make_backend(spec: str, context: dict | None = None) -> Backend:
    """Build a backend from a spec string.

    Schemes: ``stub:<fixture>`` (named fixture or JSON table file),
    ``ngram:<corpus-path>,<order>``, ``remote:<url>`` (``GG_SCORER_URL``
    when the url is omitted). ``context`` supplies the map/trace the
    oracle stub needs; the harness fills it in.
    """
    import os

    scheme, _, arg = spec.partition(":")
    context = context or {}
    if scheme == "stub":
        if arg == "uniform":
            return StubBackend(default=0.5)
        if arg == "oracle-next-room":
            try:
                smap, trace = context["map"], context["trace"]
            except KeyError:
                raise BackendError(
                    "stub:oracle-next-room needs a map and human trace in context"
                ) from None
            return OracleNextRoomStub(smap, trace,
                                      lookahead=context.get("lookahead", 25))
        try:
            with open(arg, encoding="utf-8") as fh:
                table = json.load(fh)
        except OSError as exc:
            raise BackendError(f"unknown stub fixture {arg!r}") from exc
        return StubBackend(rules=table.get("rules", {}),
                           default=table.get("default", STUB_DEFAULT_PROB))
    if scheme == "ngram":
        path, _, order = arg.rpartition(",")
        if not path:
            raise BackendError("ngram spec must be 'ngram:<corpus-path>,<order>'")
        try:
            order_n = int(order)
        except ValueError:
            raise BackendError(f"bad n-gram order {order!r}") from None
        return NgramBackend.from_file(path, order=order_n)
    if scheme == "remote":
        url = arg or os.environ.get("GG_SCORER_URL", "")
        if not url:
            raise BackendError("remote backend needs a url or GG_SCORER_URL")
        return RemoteBackend(url)
    raise BackendError(f"unknown backend scheme {scheme!r} in {spec!r}")
