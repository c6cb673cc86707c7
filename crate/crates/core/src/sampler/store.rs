use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelDims, NationalCoefficients, RegionCoefficients, WeightMatrix};
use crate::sampler::{ParameterState, PriorConfig, SamplerConfig};
use crate::sv::SvParams;

/// Everything needed to interpret the binary draw records, serialized as a
/// single JSON line at the top of the file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoreHeader {
    pub dims: ModelDims,
    pub prior: PriorConfig,
    pub sampler: SamplerConfig,
    /// Connectivity matrix, row by row.
    pub weights: Vec<Vec<f64>>,
    pub region_names: Vec<String>,
    pub region_var_names: Vec<String>,
    pub national_var_names: Vec<String>,
    /// Periods covered by the stored factor and volatility paths.
    pub effective_periods: usize,
    /// Number of f64 values per draw record.
    pub draw_len: usize,
    /// Number of stored draws.
    pub draw_count: usize,
    /// `(block name, length)` pairs in record order, documenting the layout.
    pub blocks: Vec<(String, usize)>,
}

/// Lengths of the per-draw blocks, in record order.
fn block_layout(dims: &ModelDims, national_intercept: bool) -> Vec<(String, usize)> {
    let t = dims.effective_periods();
    let l = dims.shock_dim();
    let f = dims.factors;
    let m = dims.region_coef_len();
    let ell = dims.national_vars;
    let national_len =
        dims.domestic_lags * ell * ell + dims.foreign_lags * ell * dims.region_vars
            + if national_intercept { ell } else { 0 };
    vec![
        ("region_coeffs".into(), dims.regions * m),
        ("national_coeffs".into(), national_len),
        ("hierarchy_mean".into(), m),
        ("hierarchy_variances".into(), m),
        ("loadings".into(), l * f),
        ("factors".into(), t * f),
        ("log_vol_factors".into(), t * f),
        ("log_vol_idio".into(), t * l),
        ("factor_sv".into(), 3 * f),
        ("idio_sv".into(), 3 * l),
    ]
}

/// All retained posterior draws plus the metadata to interpret them.
///
/// On disk the store is one JSON header line followed by the draw records as
/// little-endian f64 bytes, `draw_len` values per draw. The format
/// round-trips losslessly and identical runs produce byte-identical files.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorStore {
    header: StoreHeader,
    records: Vec<f64>,
}

impl PosteriorStore {
    pub fn new(
        dims: &ModelDims,
        prior: &PriorConfig,
        sampler: &SamplerConfig,
        weights: &WeightMatrix,
        region_names: Vec<String>,
        region_var_names: Vec<String>,
        national_var_names: Vec<String>,
    ) -> Self {
        let blocks = block_layout(dims, sampler.national_intercept);
        let draw_len = blocks.iter().map(|(_, n)| n).sum();
        let w = weights.as_matrix();
        let rows = (0..w.nrows())
            .map(|i| w.row(i).iter().copied().collect())
            .collect();
        PosteriorStore {
            header: StoreHeader {
                dims: dims.clone(),
                prior: *prior,
                sampler: *sampler,
                weights: rows,
                region_names,
                region_var_names,
                national_var_names,
                effective_periods: dims.effective_periods(),
                draw_len,
                draw_count: 0,
                blocks,
            },
            records: Vec::new(),
        }
    }

    pub fn header(&self) -> &StoreHeader {
        &self.header
    }

    pub fn dims(&self) -> &ModelDims {
        &self.header.dims
    }

    pub fn draw_count(&self) -> usize {
        self.header.draw_count
    }

    /// Reconstruct the connectivity matrix stored in the header.
    pub fn weights(&self) -> Result<WeightMatrix> {
        let n = self.header.weights.len();
        let mut mat = DMatrix::zeros(n, n);
        for (i, row) in self.header.weights.iter().enumerate() {
            if row.len() != n {
                return Err(Error::io(format!(
                    "stored weight row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                mat[(i, j)] = v;
            }
        }
        WeightMatrix::new(mat)
    }

    /// Append one retained state to the record buffer.
    pub fn push(&mut self, state: &ParameterState) -> Result<()> {
        let start = self.records.len();
        for region in &state.regions {
            self.records.extend(region.pack().iter());
        }
        for block in state.national.domestic.iter().chain(&state.national.regional) {
            self.records.extend(block.as_slice());
        }
        if self.header.sampler.national_intercept {
            let intercept = state.national.intercept.as_ref().ok_or_else(|| {
                Error::config("state is missing the national intercept the store expects")
            })?;
            self.records.extend(intercept.iter());
        }
        self.records.extend(state.hierarchy.mean.iter());
        self.records.extend(state.hierarchy.variances.iter());
        self.records.extend(state.loadings.as_slice());
        self.records.extend(state.factors.as_slice());
        self.records.extend(state.log_vol_factors.as_slice());
        self.records.extend(state.log_vol_idio.as_slice());
        for p in &state.factor_sv {
            self.records
                .extend([p.level, p.persistence, p.innovation_var]);
        }
        for p in &state.idio_sv {
            self.records
                .extend([p.level, p.persistence, p.innovation_var]);
        }
        let added = self.records.len() - start;
        if added != self.header.draw_len {
            self.records.truncate(start);
            return Err(Error::config(format!(
                "state packs to {added} values, store expects {}",
                self.header.draw_len
            )));
        }
        self.header.draw_count += 1;
        Ok(())
    }

    /// Borrow one stored draw.
    pub fn draw(&self, index: usize) -> Result<PosteriorDraw<'_>> {
        if index >= self.header.draw_count {
            return Err(Error::config(format!(
                "draw index {index} out of range ({} stored)",
                self.header.draw_count
            )));
        }
        let len = self.header.draw_len;
        Ok(PosteriorDraw {
            header: &self.header,
            values: &self.records[index * len..(index + 1) * len],
        })
    }

    /// Iterate over all stored draws.
    pub fn draws(&self) -> impl Iterator<Item = PosteriorDraw<'_>> {
        (0..self.header.draw_count).map(|i| self.draw(i).expect("index in range"))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path).map_err(|e| {
            Error::io(format!("cannot create {}: {e}", path.display()))
        })?);
        let header = serde_json::to_string(&self.header)
            .map_err(|e| Error::io(format!("header serialization failed: {e}")))?;
        out.write_all(header.as_bytes())?;
        out.write_all(b"\n")?;
        for v in &self.records {
            out.write_all(&v.to_le_bytes())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut file = BufReader::new(File::open(path).map_err(|e| {
            Error::io(format!("cannot open {}: {e}", path.display()))
        })?);
        let mut header_bytes = Vec::new();
        let mut byte = [0u8; 1];
        loop {
            let n = file.read(&mut byte)?;
            if n == 0 {
                return Err(Error::io(format!(
                    "{}: file ends before the header line",
                    path.display()
                )));
            }
            if byte[0] == b'\n' {
                break;
            }
            header_bytes.push(byte[0]);
        }
        let header: StoreHeader = serde_json::from_slice(&header_bytes)
            .map_err(|e| Error::io(format!("{}: malformed header: {e}", path.display())))?;
        let expected = header.draw_count * header.draw_len;
        let mut body = Vec::new();
        file.read_to_end(&mut body)?;
        if body.len() != expected * 8 {
            return Err(Error::io(format!(
                "{}: body holds {} bytes, header promises {}",
                path.display(),
                body.len(),
                expected * 8
            )));
        }
        let records = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect();
        Ok(PosteriorStore { header, records })
    }
}

/// One stored draw, unpacked lazily into typed parameter blocks.
#[derive(Clone, Copy)]
pub struct PosteriorDraw<'a> {
    header: &'a StoreHeader,
    values: &'a [f64],
}

impl<'a> PosteriorDraw<'a> {
    fn block(&self, name: &str) -> &'a [f64] {
        let mut offset = 0;
        for (n, len) in &self.header.blocks {
            if n == name {
                return &self.values[offset..offset + len];
            }
            offset += len;
        }
        unreachable!("block {name} is part of every layout");
    }

    pub fn raw(&self) -> &'a [f64] {
        self.values
    }

    /// Packed coefficient vector of one region.
    pub fn region_vector(&self, region: usize) -> DVector<f64> {
        let m = self.header.dims.region_coef_len();
        let all = self.block("region_coeffs");
        DVector::from_column_slice(&all[region * m..(region + 1) * m])
    }

    pub fn region_coeffs(&self, region: usize) -> Result<RegionCoefficients> {
        RegionCoefficients::unpack(&self.region_vector(region), &self.header.dims)
    }

    pub fn national_coeffs(&self) -> NationalCoefficients {
        let dims = &self.header.dims;
        let ell = dims.national_vars;
        let vals = self.block("national_coeffs");
        let mut pos = 0;
        let mut take = |n: usize| {
            let s = &vals[pos..pos + n];
            pos += n;
            s
        };
        let domestic = (0..dims.domestic_lags)
            .map(|_| DMatrix::from_column_slice(ell, ell, take(ell * ell)))
            .collect();
        let regional = (0..dims.foreign_lags)
            .map(|_| DMatrix::from_column_slice(ell, dims.region_vars, take(ell * dims.region_vars)))
            .collect();
        let intercept = self
            .header
            .sampler
            .national_intercept
            .then(|| DVector::from_column_slice(take(ell)));
        NationalCoefficients {
            domestic,
            regional,
            intercept,
        }
    }

    pub fn hierarchy_mean(&self) -> DVector<f64> {
        DVector::from_column_slice(self.block("hierarchy_mean"))
    }

    pub fn hierarchy_variances(&self) -> DVector<f64> {
        DVector::from_column_slice(self.block("hierarchy_variances"))
    }

    pub fn loadings(&self) -> DMatrix<f64> {
        let dims = &self.header.dims;
        DMatrix::from_column_slice(dims.shock_dim(), dims.factors, self.block("loadings"))
    }

    pub fn factors(&self) -> DMatrix<f64> {
        let t = self.header.effective_periods;
        DMatrix::from_column_slice(t, self.header.dims.factors, self.block("factors"))
    }

    pub fn log_vol_factors(&self) -> DMatrix<f64> {
        let t = self.header.effective_periods;
        DMatrix::from_column_slice(t, self.header.dims.factors, self.block("log_vol_factors"))
    }

    pub fn log_vol_idio(&self) -> DMatrix<f64> {
        let t = self.header.effective_periods;
        DMatrix::from_column_slice(t, self.header.dims.shock_dim(), self.block("log_vol_idio"))
    }

    fn sv_block(&self, name: &str, count: usize) -> Vec<SvParams> {
        let vals = self.block(name);
        (0..count)
            .map(|j| SvParams {
                level: vals[3 * j],
                persistence: vals[3 * j + 1],
                innovation_var: vals[3 * j + 2],
            })
            .collect()
    }

    pub fn factor_sv(&self) -> Vec<SvParams> {
        self.sv_block("factor_sv", self.header.dims.factors)
    }

    pub fn idio_sv(&self) -> Vec<SvParams> {
        self.sv_block("idio_sv", self.header.dims.shock_dim())
    }
}
