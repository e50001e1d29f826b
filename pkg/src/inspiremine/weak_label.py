"""Heuristic candidate selection and seeded control sampling.

Rules mark posts as likely-relevant from their comments, community name,
parent prompt, author mood tag, or share count. Controls are sampled from
posts that match none of the substring conditions so the two sets never
overlap.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass, field
from enum import Enum

from .corpus import CorpusStore, Post

__all__ = [
    "RuleKind",
    "HeuristicRule",
    "RuleReport",
    "match_rules",
    "select_candidates",
    "load_ruleset",
    "dump_ruleset",
    "write_rule_report_csv",
    "default_ruleset",
]


class RuleKind(str, Enum):
    COMMENT_SUBSTRING = "CommentSubstring"
    COMMUNITY_SUBSTRING = "CommunitySubstring"
    QUESTION_RESPONSE = "QuestionResponse"
    AUTHOR_FEELING = "AuthorFeeling"
    SHARE_THRESHOLD = "ShareThreshold"
    RANDOM_CONTROL = "RandomControl"


_SUBSTRING_KINDS = frozenset(
    {
        RuleKind.COMMENT_SUBSTRING,
        RuleKind.COMMUNITY_SUBSTRING,
        RuleKind.AUTHOR_FEELING,
    }
)


@dataclass(frozen=True)
class HeuristicRule:
    kind: RuleKind
    patterns: tuple[str, ...] = ()
    questions: tuple[str, ...] = ()
    threshold: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", RuleKind(self.kind))
        object.__setattr__(self, "patterns", tuple(self.patterns))
        object.__setattr__(self, "questions", tuple(self.questions))
        if self.kind in _SUBSTRING_KINDS:
            if not self.patterns or any(not p for p in self.patterns):
                raise ValueError(f"{self.kind.value} rule needs non-empty patterns")
        if self.kind is RuleKind.QUESTION_RESPONSE and not self.questions:
            raise ValueError("QuestionResponse rule needs at least one question")
        if self.kind is RuleKind.SHARE_THRESHOLD and self.threshold < 0:
            raise ValueError("ShareThreshold rule needs threshold >= 0")


@dataclass(frozen=True)
class RuleReport:
    post_id: str
    fired: tuple[tuple[int, str], ...]

    def fired_kinds(self, ruleset: list[HeuristicRule]) -> list[RuleKind]:
        return [ruleset[index].kind for index, _ in self.fired]


def _first_pattern_in(text: str, patterns: tuple[str, ...]) -> str | None:
    lowered = text.lower()
    for pattern in patterns:
        if pattern.lower() in lowered:
            return pattern
    return None


def match_rules(post: Post, ruleset: list[HeuristicRule]) -> RuleReport:
    """Evaluate every rule against one post. Evidence is the matched
    substring, the matched prompt, or the share count."""
    if not ruleset:
        raise ValueError("ruleset must not be empty")
    fired: list[tuple[int, str]] = []
    for index, rule in enumerate(ruleset):
        if rule.kind is RuleKind.COMMENT_SUBSTRING:
            for comment in post.comments:
                hit = _first_pattern_in(comment.body, rule.patterns)
                if hit is not None:
                    fired.append((index, hit))
                    break
        elif rule.kind is RuleKind.COMMUNITY_SUBSTRING:
            hit = _first_pattern_in(post.community, rule.patterns)
            if hit is not None:
                fired.append((index, hit))
        elif rule.kind is RuleKind.QUESTION_RESPONSE:
            if post.parent_question is not None and post.parent_question in rule.questions:
                fired.append((index, post.parent_question))
        elif rule.kind is RuleKind.AUTHOR_FEELING:
            if post.author_feeling:
                hit = _first_pattern_in(post.author_feeling, rule.patterns)
                if hit is not None:
                    fired.append((index, hit))
        elif rule.kind is RuleKind.SHARE_THRESHOLD:
            if post.share_count is not None and post.share_count >= rule.threshold:
                fired.append((index, str(post.share_count)))
        # RandomControl is sampling-only and never fires on a post.
    return RuleReport(post_id=post.id, fired=tuple(fired))


def _control_patterns(ruleset: list[HeuristicRule]) -> tuple[str, ...]:
    patterns: list[str] = []
    for rule in ruleset:
        if rule.kind in (RuleKind.COMMENT_SUBSTRING, RuleKind.COMMUNITY_SUBSTRING):
            patterns.extend(rule.patterns)
    return tuple(patterns)


def _control_eligible(post: Post, patterns: tuple[str, ...]) -> bool:
    if not patterns:
        return True
    if _first_pattern_in(post.community, patterns) is not None:
        return False
    return all(
        _first_pattern_in(comment.body, patterns) is None for comment in post.comments
    )


def select_candidates(
    store: CorpusStore,
    ruleset: list[HeuristicRule],
    control_size: int,
    seed: int,
) -> tuple[list[str], list[str]]:
    """Candidates are posts with at least one fired rule; controls are a
    seeded uniform sample of posts whose comments and community contain
    none of the substring patterns. The two sets are disjoint."""
    if control_size < 0:
        raise ValueError("control_size must be >= 0")
    candidates: list[str] = []
    candidate_ids: set[str] = set()
    eligible: list[str] = []
    patterns = _control_patterns(ruleset)
    for post in store:
        report = match_rules(post, ruleset)
        if report.fired:
            candidates.append(post.id)
            candidate_ids.add(post.id)
        elif _control_eligible(post, patterns):
            eligible.append(post.id)
    rng = random.Random(seed)
    size = min(control_size, len(eligible))
    controls = sorted(rng.sample(eligible, size)) if size else []
    assert not candidate_ids.intersection(controls)
    return candidates, controls


def load_ruleset(path) -> list[HeuristicRule]:
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, list):
        raise ValueError("ruleset file must hold a JSON array")
    rules = []
    for entry in raw:
        rules.append(
            HeuristicRule(
                kind=RuleKind(entry["kind"]),
                patterns=tuple(entry.get("patterns", ())),
                questions=tuple(entry.get("questions", ())),
                threshold=int(entry.get("threshold", 0)),
            )
        )
    return rules


def dump_ruleset(ruleset: list[HeuristicRule], path) -> None:
    payload = []
    for rule in ruleset:
        entry: dict = {"kind": rule.kind.value}
        if rule.patterns:
            entry["patterns"] = list(rule.patterns)
        if rule.questions:
            entry["questions"] = list(rule.questions)
        if rule.kind is RuleKind.SHARE_THRESHOLD:
            entry["threshold"] = rule.threshold
        payload.append(entry)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def write_rule_report_csv(reports: list[RuleReport], ruleset: list[HeuristicRule], path) -> None:
    """One row per post with fired rules: post_id,fired_rules,evidence.
    Multiple hits are ;-joined in rule order."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["post_id", "fired_rules", "evidence"])
        for report in reports:
            if not report.fired:
                continue
            kinds = ";".join(ruleset[i].kind.value for i, _ in report.fired)
            evidence = ";".join(ev for _, ev in report.fired)
            writer.writerow([report.post_id, kinds, evidence])


def default_ruleset() -> list[HeuristicRule]:
    """Comment and community screens for inspiration-related stems, the
    four prompt questions, author mood tags, and a share-count floor."""
    return [
        HeuristicRule(RuleKind.COMMENT_SUBSTRING, patterns=("inspir", "uplift")),
        HeuristicRule(RuleKind.COMMUNITY_SUBSTRING, patterns=("inspir", "uplift")),
        HeuristicRule(
            RuleKind.QUESTION_RESPONSE,
            questions=(
                "When was the last time you felt inspired?",
                "Who or what inspired you?",
                "Who inspired you and how?",
                "What is the most inspiring thing you have ever seen or heard?",
            ),
        ),
        HeuristicRule(RuleKind.AUTHOR_FEELING, patterns=("feeling inspired", "feeling up")),
        HeuristicRule(RuleKind.SHARE_THRESHOLD, threshold=10),
        HeuristicRule(RuleKind.RANDOM_CONTROL),
    ]
