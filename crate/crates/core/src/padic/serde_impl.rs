use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::PadicNumber;

/// `{"valuation": v, "digits": [d0, d1, ...], "p": p}`, with trailing zero
/// digits dropped; zero is `{"valuation": null, "digits": [], "p": p}`.
impl Serialize for PadicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PadicNumber", 3)?;
        s.serialize_field("valuation", &self.valuation())?;
        s.serialize_field("digits", &self.significant_digits())?;
        s.serialize_field("p", &self.p())?;
        s.end()
    }
}
