#!/usr/bin/env python3
"""Reference EM/F1 for freezing QA fixture scores.

Transcription of the SQuAD v1.1 evaluation logic: answers are
normalized (lowercase, punctuation stripped, articles removed,
whitespace collapsed), F1 is the multiset token overlap, and each
question takes the best score over its gold answers. Missing
predictions score zero. Usage:

    python3 tools/squad_eval_oracle.py GOLD_JSON PREDICTIONS_JSON
"""

import json
import re
import string
import sys
from collections import Counter


def normalize(text):
    text = text.lower()
    text = "".join(ch for ch in text if ch not in string.punctuation)
    text = re.sub(r"\b(a|an|the)\b", " ", text)
    return " ".join(text.split())


def f1_score(prediction, gold):
    pred_tokens = normalize(prediction).split()
    gold_tokens = normalize(gold).split()
    common = Counter(pred_tokens) & Counter(gold_tokens)
    num_same = sum(common.values())
    if num_same == 0:
        return 0.0
    precision = 1.0 * num_same / len(pred_tokens)
    recall = 1.0 * num_same / len(gold_tokens)
    return (2 * precision * recall) / (precision + recall)


def em_score(prediction, gold):
    return float(normalize(prediction) == normalize(gold))


def main():
    with open(sys.argv[1]) as f:
        gold = json.load(f)
    with open(sys.argv[2]) as f:
        predictions = json.load(f)

    rows = []
    for article in gold["data"]:
        for paragraph in article["paragraphs"]:
            for qa in paragraph["qas"]:
                qid = qa["id"]
                answers = [a["text"] for a in qa["answers"]]
                prediction = predictions.get(qid, "")
                em = max(em_score(prediction, a) for a in answers)
                f1 = max(f1_score(prediction, a) for a in answers)
                rows.append((qid, em, f1))

    for qid, em, f1 in rows:
        print(f"{qid}\t{em:.17g}\t{f1:.17g}")
    n = len(rows)
    print(f"# em={100.0 * sum(r[1] for r in rows) / n:.17g}")
    print(f"# f1={100.0 * sum(r[2] for r in rows) / n:.17g}")
    print(f"# n={n}")
    print(f"# missing={sum(1 for r in rows if r[0] not in predictions)}")


if __name__ == "__main__":
    main()
