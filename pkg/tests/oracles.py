"""Independent oracle implementations used only by the test suite.

These deliberately avoid the production code paths they check: the BGP oracle
is a plain nested-loop join, and the report oracles count straight off the
bundle's comment list using heading levels, never touching RDF.
"""

import json

from arann.model import Heading
from arann.query import Var


def nested_loop_bgp(graph, patterns):
    """All solutions by brute-force nested loops over the triple list."""
    triples = list(graph)

    def fields(triple):
        return (triple.subject, triple.predicate, triple.object)

    def extend(binding, pattern, triple):
        out = dict(binding)
        for term, value in zip((pattern.subject, pattern.predicate, pattern.object), fields(triple)):
            if isinstance(term, Var):
                if term.name in out:
                    if out[term.name] != value:
                        return None
                else:
                    out[term.name] = value
            elif term != value:
                return None
        return out

    solutions = [{}]
    for pattern in patterns:
        solutions = [
            extended
            for binding in solutions
            for triple in triples
            if (extended := extend(binding, pattern, triple)) is not None
        ]
    variables = sorted({v for p in patterns for v in p.variables()})
    return {tuple(sol[v] for v in variables) for sol in solutions}, tuple(variables)


# --- bundle-side report oracles -------------------------------------------------


def _section_membership(article):
    """block_id -> set of section ids containing it (a heading contains itself)."""
    membership = {}
    stack = []  # (level, section_id)
    for index, block in enumerate(article.blocks):
        block_id = article.block_ids[index]
        if isinstance(block, Heading):
            while stack and stack[-1][0] >= block.level:
                stack.pop()
            stack.append((block.level, block_id))
        membership[block_id] = {sid for _, sid in stack}
    return membership


def bundle_comments_per_section(article):
    """(section_id, count) rows computed from the comment list alone."""
    membership = _section_membership(article)
    sections = [
        article.block_ids[i]
        for i, block in enumerate(article.blocks)
        if isinstance(block, Heading)
    ]
    counts = {sid: 0 for sid in sections}
    for comment in article.comments:
        for sid in membership[comment.anchor.block_id]:
            counts[sid] += 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def bundle_common_targets(article):
    targets = {}
    for comment in article.comments:
        targets.setdefault(comment.author_name, set()).add(comment.anchor.block_id)
    if not targets:
        return []
    return sorted(set.intersection(*targets.values()))


def bundle_reviewer_matrix(article):
    membership = _section_membership(article)
    counts = {}
    for comment in article.comments:
        for sid in membership[comment.anchor.block_id]:
            key = (comment.author_name, sid)
            counts[key] = counts.get(key, 0) + 1
    return sorted((reviewer, sid, n) for (reviewer, sid), n in counts.items())


# --- raw JSON walk ---------------------------------------------------------------


def json_walk_counts(json_text):
    """Element counts from the raw JSON, independent of the bundle parser."""
    raw = json.loads(json_text)
    counts = {}
    for block in raw["blocks"]:
        counts[block["kind"]] = counts.get(block["kind"], 0) + 1
    counts["comments"] = len(raw["comments"])
    counts["authors"] = len(raw["metadata"].get("authors", []))
    return counts
