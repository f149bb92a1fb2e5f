#!/usr/bin/env python3
"""Builds the bundled fixture project: a Git repository plus PR metadata.

Every commit uses fixed identities and dates, so commit ids (and therefore
the metadata file) are identical on every run.

    make_fixture.py OUTPUT_DIR

creates OUTPUT_DIR/repo (a Git work tree) and OUTPUT_DIR/prs.ndjson.
"""

import json
import os
import shutil
import subprocess
import sys

BASE_TIME = 1_600_000_000
DAY = 86_400

# Reviewer expertise: library imports, technology imports and a language.
TOPICS = [
    dict(expert="alice", lang="py", libs=["vapi", "vform"], techs=["ndb"]),
    dict(expert="bob", lang="py", libs=["vtax", "vbcsdk", "vbcsdk.keys"], techs=["taskqueue"]),
    dict(expert="carol", lang="py", libs=["vautil", "vautil.validators.email"], techs=["memcache"]),
    dict(expert="dave", lang="py", libs=["vsearchkit"], techs=["search", "google.appengine.api.search"]),
    dict(expert="erin", lang="java", libs=["org.apache.commons.lang3.StringUtils", "io.grpc.Channel"], techs=[]),
    dict(expert="frank", lang="rb", libs=["sidekiq", "redis"], techs=[]),
]

# Feature directories and the reviewer who happens to own each one. Paths do
# not follow expertise, which is what separates the two strategies.
AREAS = ["billing", "accounts", "listings", "reports"]
AREA_OWNER = {"billing": "carol", "accounts": "dave", "listings": "alice", "reports": "bob"}
AUTHORS = ["ivan", "judy", "ken", "lena", "mike"]

SKELETON = {
    "README.md": "# Fixture project\n",
    "util.py": "import os\n\n\ndef env(name):\n    return os.environ.get(name)\n",
    "billing/__init__.py": "",
    "billing/models.py": "import datetime\n\n\nclass Invoice(object):\n    pass\n",
    "accounts/__init__.py": "",
    "accounts/models.py": "class Account(object):\n    pass\n",
    "listings/__init__.py": "",
    "reports/__init__.py": "",
    "src/main/java/com/acme/App.java": "package com.acme;\n\npublic class App {}\n",
    "lib/workers/base.rb": "module Workers\n  class Base; end\nend\n",
}


def run(repo, *args, env=None):
    subprocess.run(["git", "-C", repo, *args], check=True, env=env, stdout=subprocess.DEVNULL,
                   stderr=subprocess.DEVNULL)


def commit(repo, message, when):
    env = dict(os.environ)
    stamp = f"{when} +0000"
    env.update(
        GIT_AUTHOR_NAME="Fixture", GIT_AUTHOR_EMAIL="fixture@example.com", GIT_AUTHOR_DATE=stamp,
        GIT_COMMITTER_NAME="Fixture", GIT_COMMITTER_EMAIL="fixture@example.com", GIT_COMMITTER_DATE=stamp,
    )
    run(repo, "add", "-A", env=env)
    run(repo, "-c", "commit.gpgsign=false", "commit", "-q", "--allow-empty", "-m", message, env=env)
    out = subprocess.run(["git", "-C", repo, "rev-parse", "HEAD"], check=True, capture_output=True, text=True)
    return out.stdout.strip()


def write(repo, path, text):
    full = os.path.join(repo, path)
    os.makedirs(os.path.dirname(full) or repo, exist_ok=True)
    with open(full, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def python_source(topic, area, variant):
    lines = ["import logging", f"from {area} import models"]
    lines += [f"import {name}" for name in topic["libs"]]
    lines += [f"import {name}" for name in topic["techs"]]
    if variant % 2:
        # repeated use of the primary library
        lines.append(f"import {topic['libs'][0]}")
    lines += ["", "", "def handle(request):", "    logging.info('handled')", "    return models", ""]
    return "\n".join(lines)


def java_source(topic, area, variant):
    lines = [f"package com.acme.{area};", "", "import java.util.List;", "import com.acme.App;"]
    lines += [f"import {name};" for name in topic["libs"]]
    lines += ["", f"public class Service{variant} {{", "}", ""]
    return "\n".join(lines)


def ruby_source(topic, area, variant):
    lines = ["require 'json'", "require_relative 'base'"]
    lines += [f"require '{name}'" for name in topic["libs"]]
    lines += ["", f"class {area.capitalize()}Job{variant}", "end", ""]
    return "\n".join(lines)


def files_for(topic, area, variant):
    if topic["lang"] == "py":
        out = [(f"{area}/handlers.py", python_source(topic, area, variant))]
        if variant % 3 == 0:
            out.append((f"{area}/tasks.py", python_source(topic, area, variant + 1)))
        return out
    if topic["lang"] == "java":
        return [(f"src/main/java/com/acme/{area}/Service.java", java_source(topic, area, variant))]
    return [(f"lib/workers/{area}_job.rb", ruby_source(topic, area, variant))]


def build(out_dir):
    repo = os.path.join(out_dir, "repo")
    if os.path.exists(repo):
        shutil.rmtree(repo)
    os.makedirs(repo)
    subprocess.run(["git", "init", "-q", repo], check=True)
    run(repo, "symbolic-ref", "HEAD", "refs/heads/main")
    for path, text in SKELETON.items():
        write(repo, path, text)
    commit(repo, "Project skeleton", BASE_TIME - DAY)

    records = []
    for i in range(1, 41):
        topic = TOPICS[i % len(TOPICS)]
        area = AREAS[(i // 2) % len(AREAS)]
        author = AUTHORS[i % len(AUTHORS)]
        created = BASE_TIME + i * DAY
        closed = created + ((i * 7) % 5 + 1) * 20_000
        files = files_for(topic, area, i)
        referenced = [topic["expert"]]
        actual = [topic["expert"]]
        if i % 4 == 0:
            actual.append(AREA_OWNER[area])

        if i == 9:
            # the author is the topic expert and names themself
            author = topic["expert"]
            referenced = [author]
            actual = [author, AREA_OWNER[area]]
        if i == 17:
            files = [("README.md", f"# Fixture project\n\nRelease notes {i}.\n"), ("docs/notes.txt", "notes\n")]
            actual = ["frank"]
            referenced = []
        if i == 23:
            referenced, actual = [], []

        for path, text in files:
            write(repo, path, text)
        sha = commit(repo, f"PR {i}: {topic['expert']} topic in {area}", created)
        changed = [{"path": path, "commit": sha} for path, _ in files]
        if i == 30:
            changed.append({"path": "billing/removed_module.py", "commit": sha})
        records.append(dict(
            id=str(i), author=author, created_at=created, closed_at=closed, state="CLOSED", commits=[sha],
            changed_files=changed, referenced_reviewers=sorted(set(referenced)),
            actual_reviewers=sorted(set(actual)),
        ))

    # PR 41: the open request whose changed files carry the use-case imports.
    created = BASE_TIME + 41 * DAY
    first = {
        "billing/tax_handlers.py": "import logging\nfrom billing import models\nimport vapi\nimport vtax\n",
        "billing/keys.py": "import vbcsdk\nimport vbcsdk.keys\n",
        "accounts/validators.py": "import re\nimport vautil\nimport vautil.validators.email\n",
    }
    second = {
        "listings/indexer.py": "import google.appengine.ext\nimport ndb\nimport util\n",
        "listings/search_api.py": "import search\nimport google.appengine.api.search\n",
    }
    for path, text in first.items():
        write(repo, path, text)
    c1 = commit(repo, "PR 41: tax validation, part 1", created)
    for path, text in second.items():
        write(repo, path, text)
    c2 = commit(repo, "PR 41: tax validation, part 2", created + 600)
    changed = [{"path": p, "commit": c1} for p in first] + [{"path": p, "commit": c2} for p in second]
    records.append(dict(
        id="41", author="ivan", created_at=created, closed_at=None, state="OPEN", commits=[c1, c2],
        changed_files=changed, referenced_reviewers=[], actual_reviewers=[],
    ))

    with open(os.path.join(out_dir, "prs.ndjson"), "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    os.makedirs(sys.argv[1], exist_ok=True)
    build(sys.argv[1])
