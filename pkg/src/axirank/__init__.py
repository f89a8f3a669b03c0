"""Axiomatic co-author credit, self-citation-excluded institutional indices
and rank-correlation comparison of ranking systems."""
from .corpus import (AuthorSlot, Corpus, ImpactFactorTable, IngestReport, ParseError, PaperRecord,
                     SynthParams, Venue, gen_synthetic_corpus, institution_authors, load_corpus,
                     load_impact_factors, parse_paper_record, serialize_paper_record)
from .credit import (AuthorshipMode, CreditVector, credit_share_corresponding, credit_share_plain,
                     credit_vector, detect_mode)
from .indices import (AhResult, InstitutionIndices, WeightedCitationList, aac_index, ac_index,
                      ah_from_values, ah_index, aj_index, author_paper_citations, citation_weight,
                      compute_all, institution_paper_citations)
from .ranking import (CorrelationReport, ExternalRanking, RankEntry, RankingError, RankingTable,
                      align, correlation_report, kendall_tau_b, load_external_ranking, rank_by,
                      spearman)

__version__ = "0.1.0"
