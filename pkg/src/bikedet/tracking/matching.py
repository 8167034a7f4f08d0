"""Greedy overlap matching of predicted tracks to this frame's regions."""

from typing import List, NamedTuple, Sequence, Tuple

from ..config import TrackingParams
from ..geometry import iou
from ..segmentation import ObjectRegion
from .track import Track


class MatchResult(NamedTuple):
    assignments: List[Tuple[Track, ObjectRegion]]
    unmatched_regions: List[ObjectRegion]
    unmatched_tracks: List[Track]


def match(
    tracks: Sequence[Track], regions: Sequence[ObjectRegion], params: TrackingParams
) -> MatchResult:
    """
    Pair tracks with regions by descending IoU of predicted and observed boxes.

    Pairs below `match_min_overlap` are never assigned; IoU ties go to the
    lower track id, then the earlier region.

    Args:
        tracks: Live tracks whose `predicted` box is current
        regions: Regions of the frame, in segmentation order
        params: Tracking parameters

    Returns:
        Assignments in (track id) order, then the leftover regions and tracks
    """
    candidates = []
    for track in tracks:
        for j, region in enumerate(regions):
            overlap = iou(track.predicted, region.bbox)
            if overlap >= params.match_min_overlap:
                candidates.append((-overlap, track.id, j, track))
    candidates.sort(key=lambda c: c[:3])

    used_tracks, used_regions = set(), set()
    pairs = []
    for _, track_id, j, track in candidates:
        if track_id in used_tracks or j in used_regions:
            continue
        used_tracks.add(track_id)
        used_regions.add(j)
        pairs.append((track, regions[j]))

    pairs.sort(key=lambda p: p[0].id)
    return MatchResult(
        assignments=pairs,
        unmatched_regions=[r for j, r in enumerate(regions) if j not in used_regions],
        unmatched_tracks=[t for t in tracks if t.id not in used_tracks],
    )
