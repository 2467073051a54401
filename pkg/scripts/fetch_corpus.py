#!/usr/bin/env python3
"""Download pointers for the public audio corpora typically used to benchmark
the compressors. Nothing is bundled with the repository; the synthetic
fixtures (``pgbz synthetic``) cover the test suite.

Speech corpora have stable direct URLs and are fetched on request. Music
sample sites (e.g. samplefocus.com) require interactive licensing, so only the
address is printed for those.

Usage:
    python scripts/fetch_corpus.py --list
    python scripts/fetch_corpus.py --dest corpus cmu_arctic_bdl
"""

import argparse
import sys
import urllib.request
from pathlib import Path

SOURCES = {
    "cmu_arctic_bdl": (
        "http://festvox.org/cmu_arctic/packed/cmu_us_bdl_arctic.tar.bz2",
        "CMU ARCTIC speech database, US male speaker (bdl)",
    ),
    "cmu_arctic_slt": (
        "http://festvox.org/cmu_arctic/packed/cmu_us_slt_arctic.tar.bz2",
        "CMU ARCTIC speech database, US female speaker (slt)",
    ),
    "openslr_mini_librispeech": (
        "https://www.openslr.org/resources/31/dev-clean-2.tar.gz",
        "OpenSLR SLR31 mini LibriSpeech dev-clean subset",
    ),
}

MANUAL = {
    "samplefocus": "https://samplefocus.com/ (instrument/vocal samples; interactive download)",
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*", choices=[*SOURCES, []],
                        help="datasets to download")
    parser.add_argument("--dest", type=Path, default=Path("corpus"))
    parser.add_argument("--list", action="store_true", help="show sources and exit")
    args = parser.parse_args()

    if args.list or not args.names:
        for name, (url, note) in SOURCES.items():
            print(f"{name:28s} {note}\n{'':28s} {url}")
        for name, note in MANUAL.items():
            print(f"{name:28s} {note}")
        return 0

    args.dest.mkdir(parents=True, exist_ok=True)
    for name in args.names:
        url, note = SOURCES[name]
        target = args.dest / url.rsplit("/", 1)[-1]
        if target.exists():
            print(f"{target} already present, skipping")
            continue
        print(f"fetching {note}\n  {url}")
        try:
            urllib.request.urlretrieve(url, target)
        except OSError as exc:
            print(f"  download failed: {exc}", file=sys.stderr)
            return 1
        print(f"  saved {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
