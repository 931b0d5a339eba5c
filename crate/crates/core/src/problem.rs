use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::operators::FixedPointOp;

/// Constraint operators (prior knowledge) and data operators (observations)
/// over a common signal space.
#[derive(Debug, Clone)]
pub struct Problem {
    shape: (usize, usize),
    constraint_ops: Vec<(usize, FixedPointOp)>,
    data_ops: Vec<(usize, FixedPointOp)>,
}

impl Problem {
    pub fn new(shape: (usize, usize)) -> Self {
        Self {
            shape,
            constraint_ops: Vec::new(),
            data_ops: Vec::new(),
        }
    }

    fn check_id(&self, id: usize) -> Result<()> {
        if self.ids().any(|i| i == id) {
            Err(Error::DuplicateId(id))
        } else {
            Ok(())
        }
    }

    pub fn add_constraint(&mut self, id: usize, op: FixedPointOp) -> Result<&mut Self> {
        self.check_id(id)?;
        self.constraint_ops.push((id, op));
        Ok(self)
    }

    pub fn add_data(&mut self, id: usize, op: FixedPointOp) -> Result<&mut Self> {
        self.check_id(id)?;
        self.data_ops.push((id, op));
        Ok(self)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn dimension(&self) -> usize {
        self.shape.0 * self.shape.1
    }

    pub fn constraint_ops(&self) -> &[(usize, FixedPointOp)] {
        &self.constraint_ops
    }

    pub fn data_ops(&self) -> &[(usize, FixedPointOp)] {
        &self.data_ops
    }

    /// All operators, constraints first.
    pub fn ops(&self) -> impl Iterator<Item = &(usize, FixedPointOp)> {
        self.constraint_ops.iter().chain(&self.data_ops)
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops().map(|(id, _)| *id)
    }

    pub fn id_set(&self) -> BTreeSet<usize> {
        self.ids().collect()
    }

    pub fn len(&self) -> usize {
        self.constraint_ops.len() + self.data_ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn op(&self, id: usize) -> Option<&FixedPointOp> {
        self.ops().find(|(i, _)| *i == id).map(|(_, op)| op)
    }
}
