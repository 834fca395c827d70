"""
Комбинирование N+1 классификаторов и решение об идентификации
"""
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Union

import numpy as np
from loguru import logger

from database.models import FusionScheme, ScoreVector
from utils.errors import ConfigError, EmptyModelSetError, UndecidableScoreError

# "d0", "d1", ... - отдельный классификатор без комбинирования
_CLASSIFIER_NAME = re.compile(r"^d(\d+)$")

SchemeLike = Union[FusionScheme, int]


@dataclass
class RankedSpeaker:
    """Позиция в ранжированном списке"""
    speaker_id: str
    score: float
    votes: int = 0


def resolve_scheme(name: str) -> SchemeLike:
    """Имя из CLI -> FusionScheme или индекс отдельного классификатора"""
    match = _CLASSIFIER_NAME.match(name)
    if match:
        return int(match.group(1))
    return FusionScheme.from_cli(name)


def scheme_name(scheme: SchemeLike) -> str:
    return f"d{scheme}" if isinstance(scheme, int) else scheme.value


def fuse(scores: ScoreVector, scheme: FusionScheme) -> float:
    """
    Свести расстояния одного диктора к одному числу.

    Отсутствующие d_i исключаются из сумм и медианы.
    """
    available = scores.available_di
    if len(available) < len(scores.di) and scheme != FusionScheme.VQ_ONLY:
        logger.debug(
            f"[{scores.speaker_id}] {scheme.value}: исключено {len(scores.di) - len(available)} "
            f"отсутствующих d_i")

    if scheme == FusionScheme.VQ_ONLY:
        if scores.d0 is None:
            raise UndecidableScoreError("Схема vq требует d_0", scores.speaker_id)
        return scores.d0

    if scheme in (FusionScheme.SUM_CM, FusionScheme.CM_ONLY_GLOBAL):
        if not available:
            raise UndecidableScoreError(f"Схема {scheme.value}: все d_i отсутствуют", scores.speaker_id)
        return float(sum(available))

    if scheme in (FusionScheme.SUM_ALL, FusionScheme.MEDIAN_ALL):
        values = ([scores.d0] if scores.d0 is not None else []) + available
        if not values:
            raise UndecidableScoreError(f"Схема {scheme.value}: нет ни одного расстояния", scores.speaker_id)
        if scheme == FusionScheme.SUM_ALL:
            return float(sum(values))
        return float(np.median(values))

    raise ConfigError(f"Схема {scheme.value} не сводится к одному числу на диктора")


def classifier_score(scores: ScoreVector, index: int) -> float:
    """Расстояние отдельного классификатора d_index"""
    value = scores.classifier(index)
    if value is None:
        raise UndecidableScoreError(f"d_{index} отсутствует", scores.speaker_id)
    return value


def znormalize(all_scores: list[ScoreVector]) -> list[ScoreVector]:
    """
    Z-нормализация каждого классификатора по всем дикторам (выключена по
    умолчанию, в отчетах помечается отдельно).
    """
    width = max((len(s.di) for s in all_scores), default=0)

    def normalized(values: list) -> list:
        present = np.array([v for v in values if v is not None], dtype=np.float64)
        if len(present) == 0:
            return values
        mean = present.mean()
        std = present.std()
        std = std if std > 0 else 1.0
        return [None if v is None else float((v - mean) / std) for v in values]

    d0 = normalized([s.d0 for s in all_scores])
    columns = [normalized([s.di[i] if i < len(s.di) else None for s in all_scores]) for i in range(width)]

    result = []
    for row, scores in enumerate(all_scores):
        di = [columns[i][row] for i in range(len(scores.di))]
        result.append(ScoreVector(scores.speaker_id, d0[row], di))
    return result


def _scored(all_scores: list[ScoreVector], score_fn) -> list[RankedSpeaker]:
    ranked = []
    undecided = []
    for scores in all_scores:
        try:
            ranked.append(RankedSpeaker(scores.speaker_id, score_fn(scores)))
        except UndecidableScoreError:
            undecided.append(scores.speaker_id)
            ranked.append(RankedSpeaker(scores.speaker_id, math.inf))

    if len(undecided) == len(all_scores):
        raise UndecidableScoreError("Ни для одного диктора оценка не определена")
    if undecided:
        logger.debug(f"Оценка не определена для {len(undecided)} дикторов, они в конце списка")
    return ranked


def identify(all_scores: list[ScoreVector], scheme: SchemeLike, z_norm: bool = False) -> list[RankedSpeaker]:
    """
    Ранжировать дикторов по возрастанию комбинированного расстояния.

    Равенство разрешается лексикографически по speaker_id. Первый в списке -
    решение. Для схемы vote ранжирование по голосам.
    """
    if not all_scores:
        raise EmptyModelSetError("Нет зарегистрированных дикторов")

    if z_norm:
        all_scores = znormalize(all_scores)

    if scheme == FusionScheme.VOTE:
        return rank_by_vote(all_scores)

    if isinstance(scheme, int):
        ranked = _scored(all_scores, lambda s: classifier_score(s, scheme))
    else:
        ranked = _scored(all_scores, lambda s: fuse(s, scheme))

    return sorted(ranked, key=lambda r: (r.score, r.speaker_id))


def rank_by_vote(all_scores: list[ScoreVector]) -> list[RankedSpeaker]:
    """
    Каждый классификатор j = 0..N голосует за диктора с минимальным d_j
    (отсутствующие воздерживаются). Больше голосов - выше; при равенстве
    решает сумма sum-all, затем speaker_id.
    """
    if not all_scores:
        raise EmptyModelSetError("Нет зарегистрированных дикторов")

    n_classifiers = max(s.classifier_count for s in all_scores)
    votes: Counter = Counter()
    for index in range(n_classifiers):
        candidates = [
            (s.classifier(index), s.speaker_id) for s in all_scores if s.classifier(index) is not None
        ]
        if candidates:
            votes[min(candidates)[1]] += 1

    if not votes:
        raise UndecidableScoreError("Ни один классификатор не проголосовал")

    ranked = _scored(all_scores, lambda s: fuse(s, FusionScheme.SUM_ALL))
    for entry in ranked:
        entry.votes = votes.get(entry.speaker_id, 0)
    return sorted(ranked, key=lambda r: (-r.votes, r.score, r.speaker_id))


def identify_by_vote(all_scores: list[ScoreVector]) -> str:
    """Решение голосованием: побеждает большинство"""
    return rank_by_vote(all_scores)[0].speaker_id
