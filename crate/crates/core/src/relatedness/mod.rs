//! Word relatedness: ESA cosine, WordNet path similarity, the mixed
//! collocation index, and their multiplicative combination (EWC).

pub mod collocation;
pub mod esa;
pub mod wordnet;

pub use collocation::{collocation_index, CollocationTable};
pub use esa::{ConceptSpace, ConceptVector};
pub use wordnet::{SynsetId, TaxonomyGraph};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EwcParams {
    /// Weight of the WordNet path term.
    pub lambda_wnp: f64,
    /// Weight of the collocation term.
    pub lambda_coll: f64,
    /// Discount on reverse-order collocations.
    pub xi: f64,
}

impl Default for EwcParams {
    fn default() -> Self {
        EwcParams {
            lambda_wnp: 5.16,
            lambda_coll: 48.7,
            xi: 0.55,
        }
    }
}

impl EwcParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda_wnp", self.lambda_wnp),
            ("lambda_coll", self.lambda_coll),
            ("xi", self.xi),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// `esa * (1 + lambda_wnp * wnp) * (1 + lambda_coll * coll)`.
pub fn ewc(esa: f64, wnp: f64, coll: f64, params: &EwcParams) -> f64 {
    let alpha = 1.0 + params.lambda_wnp * wnp;
    let gamma = 1.0 + params.lambda_coll * coll;
    esa * alpha * gamma
}

/// All component values for one ordered word pair.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairMeasures {
    pub esa: f64,
    pub wnp: f64,
    pub coll: f64,
    pub ewc: f64,
}

impl PairMeasures {
    pub fn from_components(esa: f64, wnp: f64, coll: f64, params: &EwcParams) -> Self {
        PairMeasures {
            esa,
            wnp,
            coll,
            ewc: ewc(esa, wnp, coll, params),
        }
    }
}

/// Anything that can score an ordered pair of surface words.
pub trait Relatedness {
    fn measures(&self, w1: &str, w2: &str) -> PairMeasures;
}

/// The three knowledge sources behind EWC.
#[derive(Debug, Clone)]
pub struct RelatednessModel {
    pub concepts: ConceptSpace,
    pub taxonomy: TaxonomyGraph,
    pub collocations: CollocationTable,
    pub params: EwcParams,
}

impl RelatednessModel {
    pub fn esa(&self, w1: &str, w2: &str) -> f64 {
        self.concepts.relatedness(w1, w2)
    }

    pub fn wordnet_path(&self, w1: &str, w2: &str) -> f64 {
        self.taxonomy.path_similarity(w1, w2)
    }

    pub fn collocation(&self, w1: &str, w2: &str) -> f64 {
        self.collocations.index(w1, w2, self.params.xi)
    }
}

impl Relatedness for RelatednessModel {
    fn measures(&self, w1: &str, w2: &str) -> PairMeasures {
        PairMeasures::from_components(
            self.esa(w1, w2),
            self.wordnet_path(w1, w2),
            self.collocation(w1, w2),
            &self.params,
        )
    }
}
