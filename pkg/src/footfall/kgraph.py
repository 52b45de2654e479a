"""Local knowledge-graph snapshot: taxonomy traversal and entity linking.

The store holds (subject, predicate, object) triples with three predicates:
``subject`` links an entity to a category, ``broader`` links a category to
its parent, and ``label`` attaches a surface form. Category expansion walks
``broader`` edges inverted (root towards narrower), entity linking is a
greedy longest-match gazetteer over the label index.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field

from .ingest import RejectedRow

log = logging.getLogger(__name__)

PREDICATES = ("subject", "broader", "label")

_APOSTROPHES = re.compile(r"['’]")
_PUNCT = re.compile(r"[^0-9a-z\s]+")
_WS = re.compile(r"\s+")


def normalize_term(text: str) -> str:
    """Lowercase, underscores to spaces, strip punctuation, collapse spaces.

    Apostrophes vanish (women's -> womens); other punctuation splits tokens
    (hi-fi -> hi fi). No stemming: labels are proper-noun heavy.
    """
    text = text.lower().replace("_", " ")
    text = _APOSTROPHES.sub("", text)
    text = _PUNCT.sub(" ", text)
    return _WS.sub(" ", text).strip()


def local_name(node_id: str) -> str:
    """Fallback surface form for unlabeled nodes, derived from the node id."""
    return normalize_term(node_id.rsplit(":", 1)[-1])


@dataclass(frozen=True)
class Triple:
    subject: str
    predicate: str
    object: str

    def __post_init__(self):
        if self.predicate not in PREDICATES:
            raise ValueError(f"unknown predicate {self.predicate!r}")
        if self.predicate == "label" and not self.object.strip():
            raise ValueError("label objects must be non-empty literals")


class TripleStore:
    """Read-only triple index; concurrent traversals are safe after load."""

    def __init__(self, triples=()):
        self._triples: set[Triple] = set()
        self._by_subject: dict[tuple[str, str], list[str]] = {}
        self._by_object: dict[tuple[str, str], list[str]] = {}
        self._labels: dict[str, list[str]] = {}  # node -> normalized labels
        self._label_index: dict[str, list[str]] = {}  # normalized label -> nodes
        self._max_label_tokens = 1
        self._nodes: set[str] = set()
        for t in triples:
            self.add(t)

    def add(self, triple: Triple) -> None:
        if triple in self._triples:
            return
        self._triples.add(triple)
        self._nodes.add(triple.subject)
        if triple.predicate == "label":
            label = normalize_term(triple.object)
            if not label:
                return
            self._labels.setdefault(triple.subject, []).append(label)
            nodes = self._label_index.setdefault(label, [])
            if triple.subject not in nodes:
                nodes.append(triple.subject)
            self._max_label_tokens = max(self._max_label_tokens, len(label.split()))
        else:
            self._nodes.add(triple.object)
            key = (triple.subject, triple.predicate)
            values = self._by_subject.setdefault(key, [])
            if triple.object not in values:
                values.append(triple.object)
            rkey = (triple.object, triple.predicate)
            rvalues = self._by_object.setdefault(rkey, [])
            if triple.subject not in rvalues:
                rvalues.append(triple.subject)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._nodes

    def objects(self, subject: str, predicate: str) -> list[str]:
        return sorted(self._by_subject.get((subject, predicate), ()))

    def subjects(self, obj: str, predicate: str) -> list[str]:
        return sorted(self._by_object.get((obj, predicate), ()))

    def narrower(self, category: str) -> list[str]:
        """Children of a category: nodes whose broader edge points at it."""
        return self.subjects(category, "broader")

    def label(self, node_id: str) -> str:
        labels = self._labels.get(node_id)
        if labels:
            return min(labels)
        return local_name(node_id)

    def labels_of(self, node_id: str) -> list[str]:
        return sorted(self._labels.get(node_id, ()))

    def entities(self) -> list[str]:
        """Nodes carrying at least one subject edge, i.e. linkable entities."""
        return sorted({s for (s, p) in self._by_subject if p == "subject"})

    def lookup_label(self, surface: str) -> str | None:
        """Resolve a surface form to a node id.

        When an entity and a taxonomy node share a label, the entity wins:
        only nodes with subject edges lead anywhere during query expansion.
        Remaining ties resolve to the smallest node id.
        """
        nodes = self._label_index.get(surface)
        if not nodes:
            return None
        with_subject = [n for n in nodes if (n, "subject") in self._by_subject]
        pool = with_subject or nodes
        return min(pool)

    @property
    def max_label_tokens(self) -> int:
        return self._max_label_tokens


def load_triples(path) -> tuple[TripleStore, list[RejectedRow]]:
    """Load a TSV snapshot (subject<TAB>predicate<TAB>object, # comments)."""
    store = TripleStore()
    rejects: list[RejectedRow] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                rejects.append(RejectedRow(line_no, "expected 3 tab-separated fields"))
                continue
            subject, predicate, obj = (p.strip() for p in parts)
            try:
                store.add(Triple(subject, predicate, obj))
            except ValueError as exc:
                rejects.append(RejectedRow(line_no, str(exc)))
    return store, rejects


def expand_category(store: TripleStore, root: str, depth: int) -> Counter:
    """Depth-first expansion of a category into a term multiset.

    Follows broader edges inverted (root towards narrower categories) up to
    ``depth`` levels below the root. Every node contributes its normalized
    label once per expansion; distinct nodes sharing a label raise that
    term's count. Cycles terminate through the visited set.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if root not in store:
        log.warning("category root %s absent from store", root)
        return Counter()
    terms: Counter = Counter()
    counted: set[str] = set()
    # Best discovery depth per node. Re-expanding on strictly shallower
    # rediscovery keeps the result equal to the min-depth <= lambda set,
    # so deepening the bound can only grow the expansion.
    best = {root: 0}
    stack = [(root, 0)]
    while stack:
        node, level = stack.pop()
        if node not in counted:
            counted.add(node)
            terms[store.label(node)] += 1
        if level >= depth:
            continue
        # Reversed push keeps the visit order depth-first in id order.
        for child in reversed(store.narrower(node)):
            if child not in best or level + 1 < best[child]:
                best[child] = level + 1
                stack.append((child, level + 1))
    return terms


@dataclass(frozen=True)
class CategoryDocument:
    category: str
    terms: Counter

    def __post_init__(self):
        if not self.terms:
            raise ValueError(f"category document {self.category!r} has no terms")


def build_category_corpus(store, registry, depth: int = 5) -> list[CategoryDocument]:
    """Expand every registered category root into its term document."""
    docs = []
    for cat in registry:
        if cat.kg_root not in store:
            raise ValueError(
                f"category {cat.name!r}: root {cat.kg_root!r} missing from store"
            )
        docs.append(CategoryDocument(cat.name, expand_category(store, cat.kg_root, depth)))
    return docs


def extract_entities(store: TripleStore, query_text: str) -> list[str]:
    """Link query text to graph nodes by greedy longest label match.

    Scans left to right over normalized tokens, matching the longest
    possible n-gram against the label index; matches never overlap and
    unmatched tokens are dropped.
    """
    tokens = normalize_term(query_text).split()
    entities: list[str] = []
    i = 0
    while i < len(tokens):
        matched = False
        top = min(len(tokens), i + store.max_label_tokens)
        for j in range(top, i, -1):
            node = store.lookup_label(" ".join(tokens[i:j]))
            if node is not None:
                entities.append(node)
                i = j
                matched = True
                break
        if not matched:
            i += 1
    return entities


@dataclass(frozen=True)
class QueryContext:
    entities: tuple[str, ...]
    document: Counter  # multiset union of per-entity expansions


def _expand_entity(store: TripleStore, entity: str, hops: int) -> Counter:
    """Subject-edge categories of one entity plus `hops` broader levels."""
    terms: Counter = Counter()
    seeds = store.objects(entity, "subject")
    visited = set(seeds)
    frontier = list(seeds)
    for node in frontier:
        terms[store.label(node)] += 1
    for _ in range(hops):
        nxt: list[str] = []
        for node in frontier:
            for parent in store.objects(node, "broader"):
                if parent not in visited:
                    visited.add(parent)
                    nxt.append(parent)
                    terms[store.label(parent)] += 1
        frontier = nxt
        if not frontier:
            break
    return terms


def query_context(store: TripleStore, queries, hops: int = 2) -> QueryContext:
    """Build the cyber-context document for a visit's queries.

    The document is the multiset union, over every query and every linked
    entity, of the entity's subject categories expanded ``hops`` broader
    levels up the taxonomy.
    """
    entities: list[str] = []
    document: Counter = Counter()
    for text in queries:
        for entity in extract_entities(store, text):
            entities.append(entity)
            document += _expand_entity(store, entity, hops)
    return QueryContext(entities=tuple(entities), document=document)
