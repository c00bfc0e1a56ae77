"""Parse textbook markup, segment it into passages, and search them.

Run: python3 demos/textbook_retrieval.py
"""

from riddle_arena import build_index, make_context, parse_book, search, segment_passages

BOOK = """
<h1>Waves</h1>
<p>A wave is a disturbance that carries energy from one place to another
without transporting matter. Mechanical waves need a medium while
electromagnetic waves travel through empty space.</p>
<h2>Polarization</h2>
<p>Polarization restricts the oscillation of a transverse wave to a single
plane. Longitudinal waves cannot be polarized because their displacement
already lies along the direction of travel.</p>
<p>A polaroid film transmits only the component of light whose electric
field lines up with the film axis, which is how polarized sunglasses cut
reflected glare.</p>
<h1>Chemical Change</h1>
<h2>Catalysts</h2>
<p>A catalyst increases the rate of a reaction by offering a pathway with
lower activation energy, and it emerges unchanged when the reaction is
complete. Enzymes play the same role in living cells.</p>
"""

book = parse_book(BOOK, "science-primer")
print(f"book: {book.title}")
for chapter in book.children:
    print(f"  chapter {chapter.title!r}")
    for child in chapter.children:
        label = child.title if child.kind == "section" else child.text[:40] + "..."
        print(f"    {child.kind}: {label}")

passages = segment_passages(book, max_words=60)
print(f"\n{len(passages)} passages:")
for p in passages:
    print(f"  {p.id}  [{' / '.join(p.heading_path)}]  {p.word_count} words")

index = build_index(passages)
print(f"\nindex: {index.passage_count} passages, {len(index.vocabulary)} terms")

query = "which waves can be polarized by a film"
hits = search(index, query, k=3)
bundle = make_context(index, hits)
print(f"\nquery: {query!r}")
for hit in hits:
    print(f"  {hit.score:.4f}  {hit.passage_id}")
print(f"confidence (mean of top scores): {bundle.confidence:.4f}")
print(f"context preview: {bundle.context_text[:90]}...")
