//! The pair `(alpha, weight scheme)` that fixes one instance of the domain.

use serde::Serialize;

use crate::error::Result;
use crate::graph::Vertex;
use crate::ideals::MaxIdealKey;
use crate::index_seq::Alpha;
use crate::monoid::Monomial;
use crate::ordinal::Ordinal;
use crate::scheme::WeightScheme;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    #[serde(serialize_with = "ser_alpha")]
    pub alpha: Alpha,
    pub scheme: WeightScheme,
}

fn ser_alpha<S: serde::Serializer>(a: &Alpha, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(a)
}

impl Construction {
    pub fn new(alpha: Ordinal, scheme: WeightScheme) -> Result<Self> {
        let alpha = Alpha::new(alpha)?;
        scheme.check_alpha(&alpha)?;
        Ok(Construction { alpha, scheme })
    }

    /// `alpha = 3`, weight 2: the worked example.
    pub fn example_a3() -> Self {
        Construction::new(Ordinal::from_nat(3), WeightScheme::Constant(2)).expect("valid")
    }

    pub fn alpha(&self) -> &Ordinal {
        self.alpha.value()
    }

    pub fn check_vertex(&self, v: &Vertex) -> Result<()> {
        v.check(&self.alpha)
    }

    pub fn check_monomial(&self, m: &Monomial) -> Result<()> {
        m.factors().try_for_each(|(v, _)| self.check_vertex(v))
    }

    pub fn check_key(&self, k: &MaxIdealKey) -> Result<()> {
        self.alpha.check_height(k.height())?;
        self.alpha.check_seq(k.tau_index())
    }
}
