#!/usr/bin/env python3
# Copyright 2026 The dapt Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the bundled synthetic mini-corpus under data/demo/.

The text is template-generated; it only needs realistic shape (multi-sentence
documents, shared domain vocabulary, a task set that resembles one domain).
"""

import argparse
import json
import pathlib
import random

BIOMED = {
    "subject": ["patients", "participants", "adults", "children", "women", "elderly subjects",
                "outpatients", "volunteers", "smokers", "survivors"],
    "condition": ["hypertension", "type 2 diabetes", "asthma", "heart failure", "depression",
                  "chronic kidney disease", "migraine", "osteoarthritis", "sepsis", "stroke",
                  "obesity", "atrial fibrillation", "psoriasis", "anemia", "influenza"],
    "drug": ["metformin", "placebo", "aspirin", "atorvastatin", "lisinopril", "insulin glargine",
             "sertraline", "ibuprofen", "warfarin", "amoxicillin", "prednisone", "omeprazole",
             "vitamin D", "apixaban", "salbutamol"],
    "outcome": ["mortality", "blood pressure", "glycated hemoglobin", "hospital readmission",
                "quality of life", "pain scores", "serum creatinine", "adverse events",
                "length of stay", "symptom severity", "body weight", "exacerbation rate"],
    "design": ["randomized controlled trial", "double-blind trial", "cohort study",
               "multicenter trial", "pilot study", "crossover trial", "meta-analysis"],
    "verb": ["reduced", "improved", "did not change", "increased", "was associated with",
             "significantly lowered", "modestly improved"],
    "time": ["12 weeks", "6 months", "one year", "30 days", "24 months", "8 weeks"],
    "setting": ["primary care", "intensive care units", "community hospitals", "rural clinics",
                "academic centers", "nursing homes", "emergency departments"],
    "measure": ["questionnaire", "biopsy", "echocardiography", "spirometry", "blood test",
                "imaging", "interview", "urine sample"],
    "effect": ["hazard ratio", "odds ratio", "relative risk", "mean difference"],
}

BIOMED_TEMPLATES = [
    "We conducted a {design} of {n} {subject} with {condition}.",
    "{Subject} were randomly assigned to {drug} or {drug2} for {time}.",
    "The primary outcome was {outcome} at {time}.",
    "Treatment with {drug} {verb} {outcome} compared with {drug2}.",
    "Secondary outcomes included {outcome} and {outcome2}.",
    "Among {subject} with {condition}, {outcome} {verb} after {time}.",
    "Adverse events were reported in {pct}% of the {drug} group.",
    "These findings suggest that {drug} may benefit {subject} with {condition}.",
    "Baseline {outcome} did not differ between groups.",
    "Dr. {name} and colleagues enrolled {n} {subject} at {sites} sites.",
    "The incidence of {condition} was {pct} per 1000 person-years.",
    "Follow-up lasted {time}, and {pct}% of {subject} completed the study.",
    "{Subject} received {dose} mg of {drug} daily in {setting}.",
    "{Outcome} was assessed by {measure} at {time}.",
    "The {effect} for {outcome} was 0.{pct} (95% CI, 0.{lo} to 0.{hi}).",
    "Recruitment took place in {setting} between {year} and {year2}.",
    "Mean age was {age} years, and {pct}% were {subject}.",
]

CS = {
    "model": ["neural network", "transformer", "decision tree", "graph neural network",
              "language model", "convolutional network", "support vector machine", "autoencoder"],
    "task": ["image classification", "machine translation", "link prediction", "code search",
             "question answering", "object detection", "named entity recognition", "parsing"],
    "metric": ["accuracy", "F1 score", "BLEU", "latency", "throughput", "perplexity", "recall"],
    "data": ["benchmark", "dataset", "corpus", "graph", "training set"],
    "verb": ["outperforms", "matches", "improves on", "scales better than", "generalizes beyond"],
}

CS_TEMPLATES = [
    "We propose a {model} for {task}.",
    "Our {model} {verb} prior work on the {task} {data}.",
    "Experiments show gains in {metric} of {pct} points.",
    "The {data} contains {n} examples for {task}.",
    "We analyze the {metric} of each {model} under distribution shift.",
    "Training the {model} requires {n} GPU hours.",
]

NEWS = {
    "who": ["the mayor", "lawmakers", "the senator", "city officials", "the president",
            "protesters", "the company", "investors", "the governor", "union leaders"],
    "what": ["a new budget", "the election results", "a tax proposal", "the merger",
             "stadium funding", "a trade deal", "the transit plan", "housing reform"],
    "verb": ["announced", "rejected", "criticized", "approved", "debated", "delayed"],
    "place": ["downtown", "in the capital", "across the state", "at city hall", "overseas"],
    "when": ["on Monday", "last week", "on Friday", "this morning", "late Tuesday"],
}

NEWS_TEMPLATES = [
    "{Who} {verb} {what} {when}.",
    "Officials said {what} would be reviewed {place}.",
    "{Who} met {place} to discuss {what}.",
    "Critics argue that {what} favors {who}.",
    "The vote on {what} is expected {when}.",
]

NAMES = ["Smith", "Garcia", "Chen", "Okafor", "Novak", "Haddad", "Kim", "Rossi", "Singh"]


def fill(template, vocab, rng):
    values = {}
    for key, options in vocab.items():
        picks = rng.sample(options, 2)
        values[key] = picks[0]
        values[key + "2"] = picks[1]
        values[key.capitalize()] = picks[0][0].upper() + picks[0][1:]
    values.update(n=rng.randint(20, 4000), pct=rng.randint(1, 60), sites=rng.randint(2, 40),
                  name=rng.choice(NAMES), dose=rng.choice([5, 10, 20, 40, 50, 100, 250, 500]),
                  lo=rng.randint(10, 49), hi=rng.randint(50, 99), year=rng.randint(1995, 2010),
                  year2=rng.randint(2011, 2019), age=rng.randint(8, 85))
    return template.format(**values)


def document(templates, vocab, rng, min_sents, max_sents):
    count = rng.randint(min_sents, max_sents)
    return " ".join(fill(rng.choice(templates), vocab, rng) for _ in range(count))


def write(path, domain, docs, prefix):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for i, text in enumerate(docs):
            f.write(json.dumps({"id": f"{prefix}{i:05d}", "domain": domain, "text": text},
                               ensure_ascii=False) + "\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=str(pathlib.Path(__file__).parent.parent / "data" / "demo"))
    parser.add_argument("--seed", type=int, default=20200423)
    args = parser.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    write(out / "biomed.jsonl", "biomed",
          [document(BIOMED_TEMPLATES, BIOMED, rng, 3, 6) for _ in range(3600)], "bio-")
    write(out / "cs.jsonl", "cs",
          [document(CS_TEMPLATES, CS, rng, 3, 6) for _ in range(400)], "cs-")
    write(out / "news.jsonl", "news",
          [document(NEWS_TEMPLATES, NEWS, rng, 3, 6) for _ in range(400)], "news-")
    # Task abstracts: shorter documents drawn from a slice of the biomed templates.
    task_templates = BIOMED_TEMPLATES[:6]
    write(out / "rct_task.jsonl", "rct",
          [document(task_templates, BIOMED, rng, 2, 3) for _ in range(100)], "rct-")


if __name__ == "__main__":
    main()
