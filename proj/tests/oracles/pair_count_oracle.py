#!/usr/bin/env python3
"""Brute-force raw pair weights for a MediaWiki XML fixture.

Re-reads the dump with the standard library only and prints one line per
concept pair: "key_a<TAB>key_b<TAB>weight", keys sorted, lines sorted.
"""
import argparse
import re
import sys
import xml.etree.ElementTree as ET
from collections import defaultdict, deque
from itertools import combinations

MAIN_CATEGORIES = [
    "Culture and the arts", "Geography and places", "Health and fitness",
    "History and events", "Human activities", "Mathematics and logic",
    "Natural and physical sciences", "People and self", "Philosophy and thinking",
    "Religion and belief systems", "Society and social sciences",
    "Technology and applied sciences", "Reference works",
]

HEADING = re.compile(r"^\s*(=+)\s*(.*?)\s*(=+)\s*$")
REDIRECT = re.compile(r"^\s*#redirect\s*:?\s*\[\[([^\]]+)\]\]", re.IGNORECASE)


def normalize(title):
    return " ".join(title.replace("_", " ").split())


def key(title):
    t = normalize(title)
    return t[:1].lower() + t[1:] if t[:1].isascii() else t


def local(tag):
    return tag.rsplit("}", 1)[-1]


def read_pages(path):
    pages = []
    for page in ET.parse(path).getroot():
        if local(page.tag) != "page":
            continue
        title, text, redirect = None, "", None
        for child in page.iter():
            name = local(child.tag)
            if name == "title":
                title = child.text or ""
            elif name == "text":
                text = child.text or ""
            elif name == "redirect":
                redirect = child.get("title")
        if redirect is None:
            m = REDIRECT.match(text)
            if m:
                redirect = m.group(1).split("|")[0].split("#")[0]
        pages.append((normalize(title), text, redirect))
    return pages


def strip_markup(text):
    text = re.sub(r"<!--.*?-->", "", text, flags=re.DOTALL)
    while True:
        reduced = re.sub(r"\{\{[^{}]*\}\}", "", text)
        if reduced == text:
            return text
        text = reduced


def raw_links(line):
    out = []
    starts = [m.start() for m in re.finditer(r"\[\[", line)]
    for i, s in enumerate(starts):
        if i > 0 and starts[i - 1] + 1 == s:
            continue
        limit = starts[i + 1] if i + 1 < len(starts) else len(line)
        close = line.find("]]", s + 2)
        end = close if 0 <= close < limit else limit
        out.append(line[s + 2:end])
    return out


def classify(inner):
    """Returns ("category", name), ("link", target) or None."""
    target = inner.split("|")[0]
    stripped = target.strip()
    if re.match(r"category\s*:", stripped, re.IGNORECASE):
        return ("category", normalize(stripped.split(":", 1)[1]))
    if stripped.startswith(":"):
        stripped = stripped[1:]
    stripped = stripped.split("#")[0]
    if ":" in stripped:
        return None
    stripped = normalize(stripped)
    return ("link", stripped) if stripped else None


def parse(title, text):
    main, see_also, cats = [], [], []
    section_level = None
    for line in strip_markup(text).split("\n"):
        m = HEADING.match(line)
        if m:
            level = min(len(m.group(1)), len(m.group(3)))
            if m.group(2).strip().lower() == "see also":
                section_level = level
            elif section_level is not None and level <= section_level:
                section_level = None
            continue
        for inner in raw_links(line):
            c = classify(inner)
            if c is None:
                continue
            if c[0] == "category":
                cats.append(c[1])
            else:
                (see_also if section_level is not None else main).append(c[1])
    return main, see_also, cats


def resolve(target, redirects):
    seen = 0
    while key(target) in redirects and seen < 8:
        target = redirects[key(target)]
        seen += 1
    return target


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("dump")
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--cap", type=int, default=500)
    args = ap.parse_args()

    pages = read_pages(args.dump)
    redirects = {key(t): normalize(r) for t, _, r in pages if r is not None}

    children = defaultdict(set)
    for t, text, r in pages:
        if r is None and t.lower().startswith("category:"):
            for parent in parse(t, text)[2]:
                children[key(parent)].add(key(t.split(":", 1)[1]))

    admitted = set()
    for root in MAIN_CATEGORIES:
        frontier = deque([(key(root), 0)])
        seen = {key(root)}
        present = key(root) in children or any(key(root) in c for c in children.values())
        if not present:
            continue
        while frontier:
            node, depth = frontier.popleft()
            admitted.add(node)
            if depth == args.depth:
                continue
            for child in children[node]:
                if child not in seen:
                    seen.add(child)
                    frontier.append((child, depth + 1))

    weights = defaultdict(int)
    for t, text, r in pages:
        if r is not None or t.lower().startswith("category:") or ":" in t:
            continue
        main_links, see_links, cats = parse(t, text)
        if not any(key(c) in admitted for c in cats):
            continue
        tkey = key(t)
        roles = {tkey: "T"}
        order_main = []
        for link in main_links:
            k = key(resolve(link, redirects))
            if k != tkey and k not in order_main:
                order_main.append(k)
        order_see = []
        for link in see_links:
            k = key(resolve(link, redirects))
            if k != tkey and k not in order_see:
                order_see.append(k)
        budget = args.cap - len(order_see)
        kept_main = [k for k in order_main if k not in order_see][:max(budget, 0)]
        for k in kept_main:
            roles[k] = "M"
        for k in order_see:
            roles[k] = "S"
        for a, b in combinations(sorted(roles), 2):
            heavy = {roles[a], roles[b]} in ({"S"}, {"T", "S"})
            weights[(a, b)] += 9 if heavy else 1

    out = sys.stdout
    for (a, b), w in sorted(weights.items()):
        out.write(f"{a}\t{b}\t{w}\n")


if __name__ == "__main__":
    main()
