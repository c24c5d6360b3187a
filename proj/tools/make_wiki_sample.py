#!/usr/bin/env python3
# Copyright 2026 The tempspan Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds tests/data/wiki_sample.jsonl from a MediaWiki XML dump.

Used once to produce the bundled encyclopedic sample. The dump used is the
shortened enwiki fixture shipped in gensim's test data
(enwiki-latest-pages-articles1.xml-p000000010p000030302-shortened.bz2).

    python3 tools/make_wiki_sample.py --max-docs 60 DUMP.xml[.bz2] \
        tests/data/wiki_sample.jsonl
"""

import argparse
import bz2
import io
import json
import re
import sys

from gensim.corpora.wikicorpus import extract_pages, filter_wiki

MIN_PARAGRAPH_CHARS = 80


def clean_paragraphs(markup):
    text = filter_wiki(markup)
    text = re.sub(r"'{2,}", "", text)
    paragraphs = []
    for line in text.split("\n"):
        line = re.sub(r"[ \t]+", " ", line).strip()
        if line.startswith("=") or line.startswith("|") or line.startswith("*"):
            continue
        if len(line) < MIN_PARAGRAPH_CHARS or line[-1] not in ".!?\"":
            continue
        # filter_wiki leaves "( )" and "(, )" behind when it drops templates.
        line = re.sub(r"\(\s*[,;]?\s*\)", "", line)
        line = re.sub(r" +([,.;:])", r"\1", line)
        paragraphs.append(line)
    return paragraphs


def main(argv):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("dump")
    parser.add_argument("output")
    parser.add_argument("--max-docs", type=int, default=None)
    args = parser.parse_args(argv[1:])
    src, dst = args.dump, args.output
    raw = open(src, "rb").read()
    if src.endswith(".bz2"):
        raw = bz2.decompress(raw)
    xml = raw.decode("utf-8")
    written = 0
    with open(dst, "w", encoding="utf-8") as out:
        for title, markup, pageid in extract_pages(io.StringIO(xml)):
            if args.max_docs is not None and written >= args.max_docs:
                break
            if markup.lstrip().upper().startswith("#REDIRECT"):
                continue
            paragraphs = clean_paragraphs(markup)
            if not paragraphs:
                continue
            record = {"id": "wiki:" + pageid, "title": title,
                      "text": "\n\n".join(paragraphs)}
            out.write(json.dumps(record, ensure_ascii=False) + "\n")
            written += 1
    print(f"wrote {written} documents to {dst}", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv)
