"""Triple store loading, category expansion, entity linking, query context."""

from collections import Counter

import pytest

from footfall.kgraph import (
    Triple,
    TripleStore,
    expand_category,
    build_category_corpus,
    extract_entities,
    load_triples,
    normalize_term,
    query_context,
)
from footfall.model import CategoryRegistry


def store_of(*triples):
    return TripleStore(Triple(*t) for t in triples)


def test_normalize_term():
    assert normalize_term("The_Face  Shop!") == "the face shop"
    assert normalize_term("Women's Fashion") == "womens fashion"
    assert normalize_term("Nokia Lumia 520") == "nokia lumia 520"


def test_load_triples_fixture(tmp_path):
    path = tmp_path / "kg.tsv"
    path.write_text(
        "# comment line\n"
        "kg:Adidas\tsubject\tkg:Category:Sportswear_brands\n"
        "kg:Category:Sportswear_brands\tlabel\tSportswear brands\n"
        "kg:Category:Sportswear_brands\tbroader\tkg:Category:Sports\n"
        "bad line without tabs\n",
        encoding="utf-8",
    )
    store, rejects = load_triples(path)
    assert len(store) == 3
    assert len(rejects) == 1 and rejects[0].line_no == 5
    assert store.objects("kg:Adidas", "subject") == ["kg:Category:Sportswear_brands"]


def test_duplicate_triples_deduplicated():
    store = store_of(
        ("kg:A", "broader", "kg:B"),
        ("kg:A", "broader", "kg:B"),
        ("kg:A", "label", "A"),
    )
    assert len(store) == 2


def test_label_predicate_requires_literal():
    with pytest.raises(ValueError):
        Triple("kg:A", "label", "   ")
    with pytest.raises(ValueError):
        Triple("kg:A", "owns", "kg:B")


def test_expand_depth_zero_is_root_label():
    store = store_of(("kg:Category:A", "label", "Alpha"))
    assert expand_category(store, "kg:Category:A", 0) == Counter({"alpha": 1})


def test_expand_depth_bound():
    # Chain A <- B <- C on broader edges; depth 1 stops at B.
    store = store_of(
        ("kg:B", "broader", "kg:A"),
        ("kg:C", "broader", "kg:B"),
        ("kg:A", "label", "A"),
        ("kg:B", "label", "B"),
        ("kg:C", "label", "C"),
    )
    assert expand_category(store, "kg:A", 1) == Counter({"a": 1, "b": 1})
    assert expand_category(store, "kg:A", 2) == Counter({"a": 1, "b": 1, "c": 1})


def test_expand_cycle_terminates():
    store = store_of(
        ("kg:B", "broader", "kg:A"),
        ("kg:A", "broader", "kg:B"),
        ("kg:A", "label", "A"),
        ("kg:B", "label", "B"),
    )
    assert expand_category(store, "kg:A", 5) == Counter({"a": 1, "b": 1})


def test_expand_missing_root_is_empty_with_warning(caplog):
    store = store_of(("kg:A", "label", "A"))
    with caplog.at_level("WARNING"):
        assert expand_category(store, "kg:Ghost", 3) == Counter()
    assert "absent" in caplog.text


def test_expand_counts_distinct_nodes_sharing_label():
    store = store_of(
        ("kg:B1", "broader", "kg:A"),
        ("kg:B2", "broader", "kg:A"),
        ("kg:A", "label", "A"),
        ("kg:B1", "label", "Twin"),
        ("kg:B2", "label", "Twin"),
    )
    assert expand_category(store, "kg:A", 1) == Counter({"a": 1, "twin": 2})


def test_expand_monotone_in_depth():
    # Diamond with uneven path lengths: deeper bounds may only add terms.
    store = store_of(
        ("kg:B", "broader", "kg:A"),
        ("kg:Z", "broader", "kg:A"),
        ("kg:X", "broader", "kg:B"),
        ("kg:C", "broader", "kg:X"),
        ("kg:C", "broader", "kg:Z"),
        ("kg:D", "broader", "kg:C"),
    )
    for depth in range(5):
        smaller = set(expand_category(store, "kg:A", depth))
        bigger = set(expand_category(store, "kg:A", depth + 1))
        assert smaller <= bigger


def test_footwear_fixture_expansion_count():
    # Synthetic subtree sized to the deployment's Footwear document: 94
    # distinct terms within five levels of the root.
    triples = [("kg:Category:Footwear", "label", "Footwear")]
    parents = ["kg:Category:Footwear"]
    made = 1
    level = 0
    while made < 94:
        level += 1
        children = []
        for i, parent in enumerate(parents):
            for j in range(3):
                if made == 94:
                    break
                node = f"kg:Category:FW_{level}_{i}_{j}"
                triples.append((node, "broader", parent))
                triples.append((node, "label", f"footwear term {made}"))
                children.append(node)
                made += 1
        parents = children
    store = store_of(*triples)
    assert level <= 5
    expansion = expand_category(store, "kg:Category:Footwear", 5)
    assert len(expansion) == 94


def test_corpus_has_one_document_per_category(bundled):
    registry, _, store = bundled
    corpus = build_category_corpus(store, registry, 5)
    assert len(corpus) == 18
    assert [d.category for d in corpus] == registry.names()


def test_corpus_depth_zero_is_root_labels(bundled):
    registry, _, store = bundled
    corpus = build_category_corpus(store, registry, 0)
    for cat, doc in zip(registry, corpus):
        assert doc.terms == Counter({store.label(cat.kg_root): 1})


def test_corpus_deterministic(bundled):
    registry, _, store = bundled
    a = build_category_corpus(store, registry, 5)
    b = build_category_corpus(store, registry, 5)
    assert [(d.category, d.terms) for d in a] == [(d.category, d.terms) for d in b]


def test_corpus_missing_root_is_hard_error(bundled):
    _, _, store = bundled
    registry = CategoryRegistry.from_roots({"Ghost": "kg:Category:DoesNotExist"})
    with pytest.raises(ValueError, match="missing from store"):
        build_category_corpus(store, registry, 5)


def test_extract_entities_worked_example(bundled):
    _, _, store = bundled
    assert extract_entities(store, "The Face Shop clear mascara review") == [
        "kg:The_Face_Shop",
        "kg:Mascara",
    ]


def test_extract_entities_no_match():
    store = store_of(("kg:A", "label", "alpha"))
    assert extract_entities(store, "completely unrelated words") == []


def test_extract_entities_longest_match_wins():
    # Both unigram and bigram labels exist; the 2-gram entity is taken. The
    # oracle enumerates all segmentations and confirms greedy-longest picks
    # the one consuming the most tokens from the left.
    store = store_of(
        ("kg:Ugg", "label", "ugg"),
        ("kg:Shoes", "label", "shoes"),
        ("kg:UggShoes", "label", "ugg shoes"),
    )
    got = extract_entities(store, "ugg shoes")
    assert got == ["kg:UggShoes"]

    def oracle(tokens):
        # all non-overlapping left-to-right greedy segmentations
        best = None
        labels = {"ugg": "kg:Ugg", "shoes": "kg:Shoes", "ugg shoes": "kg:UggShoes"}

        def walk(i, acc, consumed):
            nonlocal best
            if i >= len(tokens):
                key = (consumed, acc)
                if best is None or consumed > best[0]:
                    best = (consumed, acc)
                return
            matched = False
            for j in range(len(tokens), i, -1):
                frag = " ".join(tokens[i:j])
                if frag in labels:
                    walk(j, acc + [labels[frag]], consumed + (j - i))
                    matched = True
                    break  # greedy: longest only
            if not matched:
                walk(i + 1, acc, consumed)

        walk(0, [], 0)
        return best[1]

    assert got == oracle(["ugg", "shoes"])


def test_query_context_empty():
    store = store_of(("kg:A", "label", "alpha"))
    ctx = query_context(store, [])
    assert ctx.entities == () and ctx.document == Counter()


def test_query_context_zero_hops_subject_only():
    store = store_of(
        ("kg:Adidas", "label", "adidas"),
        ("kg:Adidas", "subject", "kg:Category:Sportswear_brands"),
        ("kg:Category:Sportswear_brands", "label", "Sportswear brands"),
        ("kg:Category:Sportswear_brands", "broader", "kg:Category:Sports"),
        ("kg:Category:Sports", "label", "Sports"),
    )
    ctx = query_context(store, ["adidas"], hops=0)
    assert ctx.document == Counter({"sportswear brands": 1})


def test_query_context_mascara_document(bundled):
    # Hand-traced expansion of the mascara entity over the bundled graph:
    # subjects {Eye makeup, Cosmetics}, one broader hop adds Makeup.
    _, _, store = bundled
    ctx = query_context(store, ["mascara"], hops=1)
    assert ctx.entities == ("kg:Mascara",)
    assert ctx.document == Counter({"eye makeup": 1, "cosmetics": 1, "makeup": 1})


def test_query_context_union_is_additive(bundled):
    _, _, store = bundled
    q1 = ["ugg shoes"]
    q2 = ["the face shop mascara"]
    combined = query_context(store, q1 + q2, hops=2).document
    parts = query_context(store, q1, hops=2).document + query_context(store, q2, hops=2).document
    assert combined == parts
