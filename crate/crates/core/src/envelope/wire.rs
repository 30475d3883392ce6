//! Binary object format.
//!
//! ```text
//! "ABEN" | version 0x01 | object type | security level (80/112/128, 0 = unrated)
//! field*   where field = u32 big-endian length ‖ bytes
//! ```
//!
//! Lists are a bare u32 big-endian count followed by their fields. Points
//! are `x ‖ y`, each left-padded to the byte width of q; the point at
//! infinity is all zeroes (`(0, 0)` has order 2, so no subgroup point
//! collides with it). GT elements are `c0 ‖ c1` at the same width, scalars
//! are padded to the byte width of r, and policies are canonical infix
//! text. Decoding is strict: non-canonical encodings and trailing bytes are
//! rejected, so `encode ∘ decode` is the identity on accepted input.

use std::collections::BTreeMap;

use crate::cpabe::{CpAttributeKey, CpHeader, CpLeafComponent, CpMasterKey, CpPrivateKey, CpPublicParams};
use crate::error::FormatError;
use crate::kpabe::{KpHeader, KpMasterKey, KpPrivateKey, KpPublicParams};
use crate::pairing::{CurvePoint, Fp, Fp2, GroupParams, GtElement, Scalar, SecurityLevel};
use crate::policy::{is_valid_attribute, parse_policy, AccessTree};

pub const MAGIC: &[u8; 4] = b"ABEN";
pub const VERSION: u8 = 0x01;
/// Magic, version, object type, security level.
pub const PREFIX_LEN: usize = 7;
/// Width of a length or count prefix.
pub const LEN_PREFIX: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum ObjectType {
    GroupParams = 0x01,
    CpPublicKey = 0x10,
    CpMasterKey = 0x11,
    CpPrivateKey = 0x12,
    CpHeader = 0x13,
    KpPublicKey = 0x20,
    KpMasterKey = 0x21,
    KpPrivateKey = 0x22,
    KpHeader = 0x23,
    Envelope = 0x30,
}

impl ObjectType {
    fn from_byte(b: u8) -> Option<Self> {
        use ObjectType::*;
        [
            GroupParams,
            CpPublicKey,
            CpMasterKey,
            CpPrivateKey,
            CpHeader,
            KpPublicKey,
            KpMasterKey,
            KpPrivateKey,
            KpHeader,
            Envelope,
        ]
        .into_iter()
        .find(|t| *t as u8 == b)
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectType::GroupParams => "group parameters",
            ObjectType::CpPublicKey => "CP-ABE public key",
            ObjectType::CpMasterKey => "CP-ABE master key",
            ObjectType::CpPrivateKey => "CP-ABE private key",
            ObjectType::CpHeader => "CP-ABE header",
            ObjectType::KpPublicKey => "KP-ABE public key",
            ObjectType::KpMasterKey => "KP-ABE master key",
            ObjectType::KpPrivateKey => "KP-ABE private key",
            ObjectType::KpHeader => "KP-ABE header",
            ObjectType::Envelope => "envelope",
        }
    }
}

/// Reads the object type from a serialized object's prefix.
pub fn peek_object_type(bytes: &[u8]) -> Result<ObjectType, FormatError> {
    let err = |offset, reason: &str| FormatError {
        what: "object",
        offset,
        reason: reason.into(),
    };
    if bytes.len() < PREFIX_LEN {
        return Err(err(bytes.len(), "truncated prefix"));
    }
    if &bytes[..4] != MAGIC {
        return Err(err(0, "bad magic"));
    }
    if bytes[4] != VERSION {
        return Err(err(4, "unsupported version"));
    }
    ObjectType::from_byte(bytes[5]).ok_or_else(|| err(5, "unknown object type"))
}

fn level_byte(level: Option<SecurityLevel>) -> u8 {
    level.map_or(0, |l| l.bits() as u8)
}

/// Serialization into the binary object format.
pub trait Encode {
    fn encode(&self) -> Vec<u8>;
}

/// Parsing from the binary object format. `Context` supplies the group
/// parameters for objects that do not embed them.
pub trait Decode: Sized {
    type Context;
    fn decode(bytes: &[u8], ctx: &Self::Context) -> Result<Self, FormatError>;
}

pub(crate) struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new(kind: ObjectType, level: Option<SecurityLevel>) -> Self {
        let mut buf = Vec::with_capacity(256);
        buf.extend_from_slice(MAGIC);
        buf.push(VERSION);
        buf.push(kind as u8);
        buf.push(level_byte(level));
        Self { buf }
    }

    pub fn field(&mut self, bytes: &[u8]) -> &mut Self {
        let len = u32::try_from(bytes.len()).expect("field under 4 GiB");
        self.buf.extend_from_slice(&len.to_be_bytes());
        self.buf.extend_from_slice(bytes);
        self
    }

    pub fn count(&mut self, n: usize) -> &mut Self {
        let n = u32::try_from(n).expect("count fits u32");
        self.buf.extend_from_slice(&n.to_be_bytes());
        self
    }

    pub fn point(&mut self, p: &CurvePoint, params: &GroupParams) -> &mut Self {
        self.field(&point_bytes(p, params))
    }

    pub fn gt(&mut self, x: &GtElement) -> &mut Self {
        self.field(&x.to_bytes())
    }

    pub fn scalar(&mut self, s: &Scalar) -> &mut Self {
        self.field(&s.to_bytes_be())
    }

    pub fn text(&mut self, s: &str) -> &mut Self {
        self.field(s.as_bytes())
    }

    pub fn finish(&mut self) -> Vec<u8> {
        std::mem::take(&mut self.buf)
    }
}

pub(crate) fn point_bytes(p: &CurvePoint, params: &GroupParams) -> Vec<u8> {
    match p.coordinates() {
        None => vec![0u8; 2 * params.field_len()],
        Some((x, y)) => {
            let mut out = x.to_bytes_be();
            out.extend(y.to_bytes_be());
            out
        }
    }
}

pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    what: &'static str,
}

impl<'a> Reader<'a> {
    /// Validates the prefix; returns the reader and the level byte.
    pub fn open(buf: &'a [u8], kind: ObjectType) -> Result<(Self, u8), FormatError> {
        let what = kind.name();
        let found = peek_object_type(buf).map_err(|e| FormatError { what, ..e })?;
        let reader = Self {
            buf,
            pos: PREFIX_LEN,
            what,
        };
        if found != kind {
            return Err(reader.error_at(5, format!("expected {what}, found {}", found.name())));
        }
        Ok((reader, buf[6]))
    }

    /// As [`Reader::open`], additionally requiring the level byte to match.
    pub fn open_with(buf: &'a [u8], kind: ObjectType, params: &GroupParams) -> Result<Self, FormatError> {
        let (reader, level) = Self::open(buf, kind)?;
        if level != level_byte(params.level()) {
            return Err(reader.error_at(6, "security level does not match parameters".into()));
        }
        Ok(reader)
    }

    fn error_at(&self, offset: usize, reason: String) -> FormatError {
        FormatError {
            what: self.what,
            offset,
            reason,
        }
    }

    pub fn error(&self, reason: impl Into<String>) -> FormatError {
        self.error_at(self.pos, reason.into())
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], FormatError> {
        if self.buf.len() - self.pos < n {
            return Err(self.error(format!("need {n} bytes, {} left", self.buf.len() - self.pos)));
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn u32(&mut self) -> Result<u32, FormatError> {
        let b = self.take(LEN_PREFIX)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    pub fn field(&mut self) -> Result<&'a [u8], FormatError> {
        let len = self.u32()? as usize;
        self.take(len)
    }

    /// A field that must be exactly `len` bytes; returns its start offset too.
    fn fixed(&mut self, len: usize) -> Result<(usize, &'a [u8]), FormatError> {
        let at = self.pos;
        let bytes = self.field()?;
        if bytes.len() != len {
            return Err(self.error_at(at, format!("field length {} != {len}", bytes.len())));
        }
        Ok((at, bytes))
    }

    /// A count with a sanity bound against the remaining input.
    pub fn count(&mut self, min_item_len: usize) -> Result<usize, FormatError> {
        let at = self.pos;
        let n = self.u32()? as usize;
        let left = self.buf.len() - self.pos;
        if n.saturating_mul(min_item_len.max(1)) > left {
            return Err(self.error_at(at, format!("count {n} exceeds remaining input")));
        }
        Ok(n)
    }

    pub fn point(&mut self, params: &GroupParams) -> Result<CurvePoint, FormatError> {
        let w = params.field_len();
        let (at, bytes) = self.fixed(2 * w)?;
        if bytes.iter().all(|&b| b == 0) {
            return Ok(CurvePoint::Infinity);
        }
        let coord = |b: &[u8]| Fp::from_bytes_be(b, params.field());
        let (Some(x), Some(y)) = (coord(&bytes[..w]), coord(&bytes[w..])) else {
            return Err(self.error_at(at, "coordinate not reduced mod q".into()));
        };
        CurvePoint::from_affine(x, y).ok_or_else(|| self.error_at(at, "point not on curve".into()))
    }

    pub fn gt(&mut self, params: &GroupParams) -> Result<GtElement, FormatError> {
        let w = params.field_len();
        let (at, bytes) = self.fixed(2 * w)?;
        let coord = |b: &[u8]| Fp::from_bytes_be(b, params.field());
        let (Some(c0), Some(c1)) = (coord(&bytes[..w]), coord(&bytes[w..])) else {
            return Err(self.error_at(at, "GT coordinate not reduced mod q".into()));
        };
        let x = GtElement::from_fp2(Fp2::new(c0, c1));
        if !x.in_subgroup(params) {
            return Err(self.error_at(at, "GT element outside the order-r subgroup".into()));
        }
        Ok(x)
    }

    pub fn scalar(&mut self, params: &GroupParams) -> Result<Scalar, FormatError> {
        let (at, bytes) = self.fixed(params.scalar_len())?;
        Scalar::from_bytes_be(bytes, params.order())
            .ok_or_else(|| self.error_at(at, "scalar not reduced mod r".into()))
    }

    pub fn text(&mut self) -> Result<&'a str, FormatError> {
        let at = self.pos;
        let bytes = self.field()?;
        std::str::from_utf8(bytes).map_err(|_| self.error_at(at, "invalid UTF-8".into()))
    }

    pub fn attribute(&mut self) -> Result<String, FormatError> {
        let at = self.pos;
        let name = self.text()?;
        if !is_valid_attribute(name) {
            return Err(self.error_at(at, format!("invalid attribute {name:?}")));
        }
        Ok(name.to_string())
    }

    pub fn policy(&mut self) -> Result<AccessTree, FormatError> {
        let at = self.pos;
        let text = self.text()?;
        let tree = parse_policy(text).map_err(|e| self.error_at(at, format!("policy: {e}")))?;
        if tree.render() != text {
            return Err(self.error_at(at, "policy text is not canonical".into()));
        }
        Ok(tree)
    }

    pub fn params(&mut self) -> Result<GroupParams, FormatError> {
        let at = self.pos;
        let text = self.text()?;
        let params = GroupParams::from_text(text).map_err(|e| self.error_at(at, e.to_string()))?;
        if params.to_text() != text {
            return Err(self.error_at(at, "parameter text is not canonical".into()));
        }
        Ok(params)
    }

    pub fn finish(self) -> Result<(), FormatError> {
        if self.pos != self.buf.len() {
            return Err(self.error(format!("{} trailing bytes", self.buf.len() - self.pos)));
        }
        Ok(())
    }
}

/// Enforces strictly increasing keys so encodings stay canonical.
fn check_sorted(prev: &mut Option<String>, next: &str, reader: &Reader<'_>) -> Result<(), FormatError> {
    if prev.as_deref().is_some_and(|p| p >= next) {
        return Err(reader.error("attributes not strictly increasing"));
    }
    *prev = Some(next.to_string());
    Ok(())
}

fn check_level_matches(reader: &Reader<'_>, level: u8, params: &GroupParams) -> Result<(), FormatError> {
    if level != level_byte(params.level()) {
        return Err(reader.error_at(6, "security level does not match embedded parameters".into()));
    }
    Ok(())
}

impl Encode for GroupParams {
    fn encode(&self) -> Vec<u8> {
        Writer::new(ObjectType::GroupParams, self.level())
            .text(&self.to_text())
            .finish()
    }
}

impl Decode for GroupParams {
    type Context = ();

    fn decode(bytes: &[u8], _: &()) -> Result<Self, FormatError> {
        let (mut r, level) = Reader::open(bytes, ObjectType::GroupParams)?;
        let params = r.params()?;
        check_level_matches(&r, level, &params)?;
        r.finish()?;
        Ok(params)
    }
}

impl Encode for CpPublicParams {
    fn encode(&self) -> Vec<u8> {
        let p = &self.params;
        Writer::new(ObjectType::CpPublicKey, p.level())
            .text(&p.to_text())
            .point(&self.g, p)
            .point(&self.h, p)
            .gt(&self.egg_alpha)
            .finish()
    }
}

impl Decode for CpPublicParams {
    type Context = ();

    fn decode(bytes: &[u8], _: &()) -> Result<Self, FormatError> {
        let (mut r, level) = Reader::open(bytes, ObjectType::CpPublicKey)?;
        let params = r.params()?;
        check_level_matches(&r, level, &params)?;
        let g = r.point(&params)?;
        let h = r.point(&params)?;
        let egg_alpha = r.gt(&params)?;
        r.finish()?;
        Ok(CpPublicParams {
            params,
            g,
            h,
            egg_alpha,
        })
    }
}

impl Encode for (&CpMasterKey, &GroupParams) {
    fn encode(&self) -> Vec<u8> {
        let (mk, p) = *self;
        Writer::new(ObjectType::CpMasterKey, p.level())
            .scalar(&mk.beta)
            .point(&mk.g_alpha, p)
            .finish()
    }
}

impl Decode for CpMasterKey {
    type Context = GroupParams;

    fn decode(bytes: &[u8], params: &GroupParams) -> Result<Self, FormatError> {
        let mut r = Reader::open_with(bytes, ObjectType::CpMasterKey, params)?;
        let beta = r.scalar(params)?;
        if beta.is_zero() {
            return Err(r.error("beta is zero"));
        }
        let g_alpha = r.point(params)?;
        r.finish()?;
        Ok(CpMasterKey { beta, g_alpha })
    }
}

impl Encode for (&CpPrivateKey, &GroupParams) {
    fn encode(&self) -> Vec<u8> {
        let (sk, p) = *self;
        let mut w = Writer::new(ObjectType::CpPrivateKey, p.level());
        w.point(&sk.d, p).count(sk.components.len());
        for (attr, comp) in &sk.components {
            w.text(attr).point(&comp.d, p).point(&comp.d_prime, p);
        }
        w.finish()
    }
}

impl Decode for CpPrivateKey {
    type Context = GroupParams;

    fn decode(bytes: &[u8], params: &GroupParams) -> Result<Self, FormatError> {
        let mut r = Reader::open_with(bytes, ObjectType::CpPrivateKey, params)?;
        let d = r.point(params)?;
        let n = r.count(3 * LEN_PREFIX)?;
        if n == 0 {
            return Err(r.error("key has no attributes"));
        }
        let mut components = BTreeMap::new();
        let mut prev = None;
        for _ in 0..n {
            let attr = r.attribute()?;
            check_sorted(&mut prev, &attr, &r)?;
            let comp = CpAttributeKey {
                d: r.point(params)?,
                d_prime: r.point(params)?,
            };
            components.insert(attr, comp);
        }
        r.finish()?;
        Ok(CpPrivateKey { d, components })
    }
}

impl Encode for (&CpHeader, &GroupParams) {
    fn encode(&self) -> Vec<u8> {
        let (h, p) = *self;
        let mut w = Writer::new(ObjectType::CpHeader, p.level());
        w.text(&h.policy.render()).point(&h.c, p).count(h.leaves.len());
        for leaf in &h.leaves {
            w.point(&leaf.c, p).point(&leaf.c_prime, p);
        }
        w.finish()
    }
}

impl Decode for CpHeader {
    type Context = GroupParams;

    fn decode(bytes: &[u8], params: &GroupParams) -> Result<Self, FormatError> {
        let mut r = Reader::open_with(bytes, ObjectType::CpHeader, params)?;
        let policy = r.policy()?;
        let c = r.point(params)?;
        let at = r.pos;
        let n = r.count(2 * LEN_PREFIX)?;
        if n != policy.leaf_count() {
            return Err(r.error_at(at, format!("{n} leaf entries for {} policy leaves", policy.leaf_count())));
        }
        let mut leaves = Vec::with_capacity(n);
        for _ in 0..n {
            leaves.push(CpLeafComponent {
                c: r.point(params)?,
                c_prime: r.point(params)?,
            });
        }
        r.finish()?;
        Ok(CpHeader { policy, c, leaves })
    }
}

impl Encode for KpPublicParams {
    fn encode(&self) -> Vec<u8> {
        let p = &self.params;
        let mut w = Writer::new(ObjectType::KpPublicKey, p.level());
        w.text(&p.to_text()).count(self.universe.len());
        for (attr, t) in self.universe.iter().zip(&self.t_images) {
            w.text(attr).point(t, p);
        }
        w.gt(&self.y_image).finish()
    }
}

impl Decode for KpPublicParams {
    type Context = ();

    fn decode(bytes: &[u8], _: &()) -> Result<Self, FormatError> {
        let (mut r, level) = Reader::open(bytes, ObjectType::KpPublicKey)?;
        let params = r.params()?;
        check_level_matches(&r, level, &params)?;
        let n = r.count(2 * LEN_PREFIX)?;
        if n == 0 {
            return Err(r.error("empty universe"));
        }
        let mut universe: Vec<String> = Vec::with_capacity(n);
        let mut t_images = Vec::with_capacity(n);
        for _ in 0..n {
            let attr = r.attribute()?;
            if universe.contains(&attr) {
                return Err(r.error(format!("duplicate universe attribute {attr:?}")));
            }
            universe.push(attr);
            t_images.push(r.point(&params)?);
        }
        let y_image = r.gt(&params)?;
        r.finish()?;
        Ok(KpPublicParams {
            params,
            universe,
            t_images,
            y_image,
        })
    }
}

impl Encode for (&KpMasterKey, &GroupParams) {
    fn encode(&self) -> Vec<u8> {
        let (mk, p) = *self;
        let mut w = Writer::new(ObjectType::KpMasterKey, p.level());
        w.count(mk.t_values.len());
        for t in &mk.t_values {
            w.scalar(t);
        }
        w.scalar(&mk.y_value).finish()
    }
}

impl Decode for KpMasterKey {
    type Context = GroupParams;

    fn decode(bytes: &[u8], params: &GroupParams) -> Result<Self, FormatError> {
        let mut r = Reader::open_with(bytes, ObjectType::KpMasterKey, params)?;
        let n = r.count(LEN_PREFIX)?;
        let mut t_values = Vec::with_capacity(n);
        for _ in 0..n {
            let t = r.scalar(params)?;
            if t.is_zero() {
                return Err(r.error("t_i is zero"));
            }
            t_values.push(t);
        }
        let y_value = r.scalar(params)?;
        r.finish()?;
        Ok(KpMasterKey { t_values, y_value })
    }
}

impl Encode for (&KpPrivateKey, &GroupParams) {
    fn encode(&self) -> Vec<u8> {
        let (sk, p) = *self;
        let mut w = Writer::new(ObjectType::KpPrivateKey, p.level());
        w.text(&sk.policy.render()).count(sk.components.len());
        for d in &sk.components {
            w.point(d, p);
        }
        w.finish()
    }
}

impl Decode for KpPrivateKey {
    type Context = GroupParams;

    fn decode(bytes: &[u8], params: &GroupParams) -> Result<Self, FormatError> {
        let mut r = Reader::open_with(bytes, ObjectType::KpPrivateKey, params)?;
        let policy = r.policy()?;
        let at = r.pos;
        let n = r.count(LEN_PREFIX)?;
        if n != policy.leaf_count() {
            return Err(r.error_at(at, format!("{n} components for {} policy leaves", policy.leaf_count())));
        }
        let components = (0..n).map(|_| r.point(params)).collect::<Result<_, _>>()?;
        r.finish()?;
        Ok(KpPrivateKey { policy, components })
    }
}

impl Encode for (&KpHeader, &GroupParams) {
    fn encode(&self) -> Vec<u8> {
        let (h, p) = *self;
        let mut w = Writer::new(ObjectType::KpHeader, p.level());
        w.count(h.components.len());
        for (attr, e) in &h.components {
            w.text(attr).point(e, p);
        }
        w.finish()
    }
}

impl Decode for KpHeader {
    type Context = GroupParams;

    fn decode(bytes: &[u8], params: &GroupParams) -> Result<Self, FormatError> {
        let mut r = Reader::open_with(bytes, ObjectType::KpHeader, params)?;
        let n = r.count(2 * LEN_PREFIX)?;
        if n == 0 {
            return Err(r.error("header has no attributes"));
        }
        let mut components = BTreeMap::new();
        let mut prev = None;
        for _ in 0..n {
            let attr = r.attribute()?;
            check_sorted(&mut prev, &attr, &r)?;
            let e = r.point(params)?;
            components.insert(attr, e);
        }
        r.finish()?;
        Ok(KpHeader { components })
    }
}

/// Serialized size of a CP-ABE header, from the format definition alone.
pub fn cp_header_len(params: &GroupParams, policy_text_len: usize, leaves: usize) -> usize {
    let point = LEN_PREFIX + 2 * params.field_len();
    PREFIX_LEN + (LEN_PREFIX + policy_text_len) + point + LEN_PREFIX + leaves * 2 * point
}

/// Serialized size of a KP-ABE header whose attribute names total `names_len` bytes.
pub fn kp_header_len(params: &GroupParams, attrs: usize, names_len: usize) -> usize {
    let point = LEN_PREFIX + 2 * params.field_len();
    PREFIX_LEN + LEN_PREFIX + attrs * (LEN_PREFIX + point) + names_len
}
