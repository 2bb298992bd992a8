"""Column schema of the feature CSVs this package consumes.

The names are declared here verbatim rather than imported from the
pipeline package: the two distributions communicate only through files,
and this module is the written-down contract for those files.
"""

from __future__ import annotations

ID_COLUMNS = ("account_id", "group_id", "label")

ACCOUNT_FEATURE_COLUMNS = (
    "post_count",
    "repost_count",
    "reply_count",
    "posting_rate",
    "unique_mentions",
    "mention_count",
    "unique_hashtags",
    "hashtag_uses",
    "unique_urls",
    "url_uses",
    "default_profile_image",
    "profile_description_length",
    "profile_url_length",
)

GROUP_FEATURE_COLUMNS = (
    "group_post_count",
    "group_member_count",
    "group_interaction_count",
    "group_user_count",
    "group_author_count",
    "group_unique_hashtags",
    "group_hashtag_uses",
    "group_unique_urls",
    "group_url_uses",
    "group_repost_count",
    "group_quote_count",
    "group_mention_count",
    "group_reply_count",
    "group_in_conversation_count",
    "group_repost_proportion",
    "group_mention_proportion",
    "group_reply_proportion",
)

FEATURE_COLUMNS = ACCOUNT_FEATURE_COLUMNS + GROUP_FEATURE_COLUMNS

ALL_COLUMNS = ID_COLUMNS + FEATURE_COLUMNS

POSITIVE_LABEL = "coordinating"
UNLABELED_LABEL = "unlabeled"

# Report-facing class names. CSV labels are lower-case training-side
# vocabulary; reports speak in terms of the prediction task.
POSITIVE_CLASS = "COORDINATING"
NEGATIVE_CLASS = "NON-COORDINATING"
