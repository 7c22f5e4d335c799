#!/usr/bin/env python3
"""Reference corpus BLEU for freezing fixture scores.

Straight transcription of the WMT scoring convention: mteval-13a
tokenization, BLEU-4 with per-segment clipped counts pooled over the
corpus, exponential smoothing when an n-gram count is zero, effective
order for corpora shorter than four tokens, and the standard brevity
penalty. Scoring is uncased. Kept dependency-free so the frozen values
in the test suite can be regenerated anywhere:

    python3 tools/bleu_oracle.py HYP_FILE REF_FILE
"""

import math
import re
import sys
from collections import Counter


def tokenize_13a(line):
    line = line.lower()
    line = line.replace("<skipped>", "")
    line = line.replace("-\n", "")
    line = line.replace("\n", " ")
    if "&" in line:
        line = line.replace("&quot;", '"')
        line = line.replace("&amp;", "&")
        line = line.replace("&lt;", "<")
        line = line.replace("&gt;", ">")
    line = f" {line} "
    line = re.sub(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])", r" \1 ", line)
    line = re.sub(r"([^0-9])([\.,])", r"\1 \2 ", line)
    line = re.sub(r"([\.,])([^0-9])", r" \1 \2", line)
    line = re.sub(r"([0-9])(-)", r"\1 \2 ", line)
    return line.split()


def ngrams(tokens, n):
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(hyps, refs, max_order=4):
    assert len(hyps) == len(refs) and hyps
    correct = [0] * max_order
    total = [0] * max_order
    sys_len = 0
    ref_len = 0
    for hyp, ref in zip(hyps, refs):
        h = tokenize_13a(hyp)
        r = tokenize_13a(ref)
        sys_len += len(h)
        ref_len += len(r)
        for n in range(1, max_order + 1):
            if len(h) < n:
                break
            total[n - 1] += len(h) - n + 1
            r_counts = ngrams(r, n)
            for gram, count in ngrams(h, n).items():
                correct[n - 1] += min(count, r_counts.get(gram, 0))

    precisions = []
    smooth = 1.0
    for n in range(1, max_order + 1):
        if total[n - 1] == 0:
            break
        if correct[n - 1] == 0:
            smooth *= 2.0
            precisions.append(100.0 / (smooth * total[n - 1]))
        else:
            precisions.append(100.0 * correct[n - 1] / total[n - 1])

    if sys_len < ref_len:
        bp = math.exp(1.0 - ref_len / sys_len) if sys_len > 0 else 0.0
    else:
        bp = 1.0
    return bp * math.exp(sum(math.log(p) for p in precisions) / len(precisions))


def main():
    hyp_path, ref_path = sys.argv[1], sys.argv[2]
    with open(hyp_path) as f:
        hyps = f.read().splitlines()
    with open(ref_path) as f:
        refs = f.read().splitlines()
    print(f"{corpus_bleu(hyps, refs):.10f}")


if __name__ == "__main__":
    main()
