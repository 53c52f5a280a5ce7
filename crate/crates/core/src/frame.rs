use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::mask::SubsetMask;

/// Ordered set of distinct labels; label `i` owns bit `i`.
#[derive(Clone, PartialEq, Eq)]
pub struct FrameOfDiscernment {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl FrameOfDiscernment {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidFrame("a frame needs at least one element".into()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidFrame(format!("duplicate label `{l}`")));
            }
        }
        Ok(Self { labels, index })
    }

    /// Frame with generated labels: `a`..`z` for small frames, `e0`.. otherwise.
    pub fn with_size(n: usize) -> Result<Self> {
        if n <= 26 {
            Self::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
        } else {
            Self::new((0..n).map(|i| format!("e{i}")))
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Fails when the mask type cannot address every element of this frame.
    pub fn check_width<M: SubsetMask>(&self) -> Result<()> {
        if self.len() > M::CAPACITY {
            return Err(Error::FrameTooLarge {
                n: self.len(),
                limit: M::CAPACITY,
            });
        }
        Ok(())
    }

    pub fn omega<M: SubsetMask>(&self) -> M {
        M::full(self.len())
    }

    pub fn mask_of<M: SubsetMask, S: AsRef<str>>(&self, labels: &[S]) -> Result<M> {
        self.check_width::<M>()?;
        labels.iter().try_fold(M::empty(), |acc, l| {
            let l = l.as_ref();
            self.position(l)
                .map(|i| acc.with(i))
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        })
    }

    pub fn labels_of<M: SubsetMask>(&self, mask: M) -> Vec<&str> {
        mask.elements().map(|i| self.labels[i].as_str()).collect()
    }

    /// `{a,b}`-style rendering, `∅` for the empty set.
    pub fn display<M: SubsetMask>(&self, mask: M) -> String {
        if mask.is_empty() {
            return "∅".to_string();
        }
        format!("{{{}}}", self.labels_of(mask).join(","))
    }

    pub fn complement<M: SubsetMask>(&self, mask: M) -> M {
        self.omega::<M>().difference(mask)
    }
}

impl fmt::Debug for FrameOfDiscernment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.labels).finish()
    }
}
