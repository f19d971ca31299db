"""From dependency parses to a scored corpus.

Builds a tiny embedding space with a planted metaphorical direction,
trains the two classifiers (verb constructions, adjective-noun) on
synthetic pairs drawn from that space, then runs the full corpus path on
two hand-parsed posts: CoNLL-U reading, candidate-pair extraction,
scoring, per-post metaphor counts, and the corpus summary.
"""

import io
import json
import tempfile
from pathlib import Path

import numpy as np

from polmet import conllu, net, scoring
from polmet.data import LabeledPair, load_posts
from polmet.embeddings import EmbeddingStore

out = Path(tempfile.mkdtemp(prefix="polmet_demo2_"))
rng = np.random.default_rng(7)
DIM = 12
u = rng.normal(size=DIM)
u /= np.linalg.norm(u)
v = rng.normal(size=DIM)
v /= np.linalg.norm(v)

# --- embedding space: metaphorical pairs sit near (+u, +v) --------------
vocab, rows = {}, []


def add_token(token, base, noise):
    vocab[token] = len(rows)
    rows.append(base + noise * rng.normal(size=DIM))


def add_pairs(prefix, construction, n):
    # enough overlap that dev accuracy climbs over several epochs instead
    # of saturating at once, which would freeze an undertrained snapshot
    pairs = []
    for i in range(n):
        gov, noun = f"{prefix}g{i:04d}", f"{prefix}n{i:04d}"
        label = i % 2
        sign = 1.0 if label else -1.0
        add_token(gov, sign * u, noise=0.45)
        add_token(noun, sign * v, noise=0.45)
        pairs.append(LabeledPair(gov, noun, construction, label))
    return pairs


verb_pairs = add_pairs("v", "verb-obj", 240)
adj_pairs = add_pairs("a", "adj-noun", 240)
# lemmas the demo sentences will use, placed near the cluster centers
for token, base in [("stifle", u), ("economy", v), ("blind", u),
                    ("devotion", v), ("eat", -u), ("bread", -v),
                    ("fresh", -u)]:
    add_token(token, base, noise=0.05)
store = EmbeddingStore(vocab, np.array(rows))
print(f"embedding store: {len(store)} tokens, dim {store.dim}")

# --- train one model per construction family ----------------------------
config = net.TrainConfig(max_epochs=60, patience=8, seed=0)
verb_model = net.train(verb_pairs[:200], verb_pairs[200:], store, config)
adj_model = net.train(adj_pairs[:200], adj_pairs[200:], store, config)
print(f"verb model dev accuracy {verb_model.best_dev_metric:.3f}, "
      f"adjective model dev accuracy {adj_model.best_dev_metric:.3f}")

# --- two hand-parsed posts ----------------------------------------------
CONLLU = """\
# sent_id = a.s1
# post_id = a
1\tWe\twe\tPRON\t_\t_\t4\tnsubj\t_\t_
2\tmust\tmust\tAUX\t_\t_\t4\taux\t_\t_
3\tnot\tnot\tPART\t_\t_\t4\tadvmod\t_\t_
4\tstifle\tstifle\tVERB\t_\t_\t0\troot\t_\t_
5\tthe\tthe\tDET\t_\t_\t6\tdet\t_\t_
6\teconomy\teconomy\tNOUN\t_\t_\t4\tobj\t_\t_

# sent_id = a.s2
# post_id = a
1\tTheir\tthey\tPRON\t_\t_\t3\tnmod\t_\t_
2\tblind\tblind\tADJ\t_\t_\t3\tamod\t_\t_
3\tdevotion\tdevotion\tNOUN\t_\t_\t4\tnsubj\t_\t_
4\tscares\tscare\tVERB\t_\t_\t0\troot\t_\t_
5\tme\tme\tPRON\t_\t_\t4\tobj\t_\t_

# sent_id = b.s1
# post_id = b
1\tHe\the\tPRON\t_\t_\t2\tnsubj\t_\t_
2\tate\teat\tVERB\t_\t_\t0\troot\t_\t_
3\tfresh\tfresh\tADJ\t_\t_\t4\tamod\t_\t_
4\tbread\tbread\tNOUN\t_\t_\t2\tobj\t_\t_
"""

POSTS = """\
post_id,politician_id,timestamp,comments,shares,likes,love,haha,wow,angry,sad,text
a,d1,2016-06-01T12:00:00+00:00,12,4,55,3,1,0,2,1,We must not stifle the economy. Their blind devotion scares me
b,d1,2016-07-01T09:30:00+00:00,2,0,8,1,0,0,0,0,He ate fresh bread
"""

sentences = conllu.parse_conllu(io.StringIO(CONLLU))
posts = load_posts(io.StringIO(POSTS))
by_post = conllu.sentences_by_post(sentences)
print(f"parsed {len(sentences)} sentences for {len(by_post)} posts "
      "(pronoun arguments are skipped by default)")

# --- score: adjective pairs to one model, verb pairs to the other -------
scored = scoring.score_corpus(posts, by_post, adj_model.params,
                              verb_model.params, store, threshold=0.7)
for sp in scored:
    print(f"post {sp.post_id}: metaphoricity {sp.metaphoricity} over "
          f"{len(sp.pairs)} scored pairs ({sp.oov_skipped} skipped as OOV)")
    for pair in sp.pairs:
        print(f"  ({pair.pair.governor}, {pair.pair.noun}) "
              f"{pair.pair.construction}: score {pair.score:.3f} "
              f"{'METAPHOR' if pair.is_metaphor else 'literal'}")

scoring.write_scored_corpus(out / "scored.jsonl", scored)
summary = scoring.corpus_summary(scored)
(out / "summary.json").write_text(json.dumps(summary, indent=2,
                                             sort_keys=True))
print(f"summary: {summary['total_metaphorical_pairs']} metaphorical pairs "
      f"in {summary['n_posts']} posts; artifacts in {out}")
