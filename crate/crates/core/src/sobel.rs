//! Sobel edge detection, as a plain integer reference and as a pipeline of
//! compiled SLIM blocks run on the simulated array.
//!
//! Both paths share one definition: zero-padded 3x3 correlation, absolute
//! value, then a right shift by two so the largest response of a single
//! kernel fits the working bit depth. `Both` adds `|Gx| + |Gy|` before the
//! shift and saturates.
//!
//! On the array each output pixel costs 9 multiplies (4-bit carry-save) and
//! a chain of 8-bit additions, each made of two 4-bit ripple-carry adders.
//! Positive and negative taps accumulate separately; both differences are
//! formed and the non-negative one is selected by the borrow bit. Pixels are
//! processed in batches of the array's parallel capacity.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::array::{ArrayError, SlimArray};
use crate::compiler::{
    build_csa_multiplier, build_ripple_adder, build_ripple_adder_with_carry, execute, from_bits, schedule, to_bits,
    CompileError, NetlistBuilder, NorNetlist, Schedule, Signal,
};
use crate::perf::{slim_workload_edp, EdpReport, EventConvention, OpProfile, PerfError, SlimPerfParams, SlimWorkload};

/// Working precision of the array path.
pub const SLIM_BITS: u8 = 4;
/// Right shift applied to `|G|` before output.
pub const OUTPUT_SHIFT: u32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum SobelError {
    Undersized { width: usize, height: usize },
    BitDepth { expected: u8, found: u8 },
    PixelOutOfRange { index: usize, value: u8 },
    SizeMismatch,
    Compile(CompileError),
    Perf(PerfError),
}

impl fmt::Display for SobelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SobelError::Undersized { width, height } => write!(f, "image {width}x{height} is smaller than 3x3"),
            SobelError::BitDepth { expected, found } => write!(f, "expected {expected}-bit image, found {found}-bit"),
            SobelError::PixelOutOfRange { index, value } => write!(f, "pixel {index} = {value} exceeds bit depth"),
            SobelError::SizeMismatch => f.write_str("pixel count does not match dimensions"),
            SobelError::Compile(e) => write!(f, "{e}"),
            SobelError::Perf(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SobelError {}

impl From<CompileError> for SobelError {
    fn from(e: CompileError) -> Self {
        SobelError::Compile(e)
    }
}

impl From<ArrayError> for SobelError {
    fn from(e: ArrayError) -> Self {
        SobelError::Compile(CompileError::Array(e))
    }
}

impl From<PerfError> for SobelError {
    fn from(e: PerfError) -> Self {
        SobelError::Perf(e)
    }
}

/// Grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub bit_depth: u8,
    pub pixels: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, bit_depth: u8, pixels: Vec<u8>) -> Result<Image, SobelError> {
        if pixels.len() != width * height {
            return Err(SobelError::SizeMismatch);
        }
        let img = Image { width, height, bit_depth, pixels };
        if let Some((index, &value)) = img.pixels.iter().enumerate().find(|(_, v)| **v > img.max_value()) {
            return Err(SobelError::PixelOutOfRange { index, value });
        }
        Ok(img)
    }

    pub fn filled(width: usize, height: usize, bit_depth: u8, value: u8) -> Image {
        Image { width, height, bit_depth, pixels: vec![value; width * height] }
    }

    pub fn max_value(&self) -> u8 {
        ((1u16 << self.bit_depth) - 1) as u8
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Zero outside the image.
    pub fn get_padded(&self, x: isize, y: isize) -> u8 {
        if x < 0 || y < 0 || x >= self.width as isize || y >= self.height as isize {
            0
        } else {
            self.get(x as usize, y as usize)
        }
    }
}

/// `pixel / 16` on an 8-bit image.
pub fn quantize_4bit(image: &Image) -> Result<Image, SobelError> {
    if image.bit_depth != 8 {
        return Err(SobelError::BitDepth { expected: 8, found: image.bit_depth });
    }
    Ok(Image {
        width: image.width,
        height: image.height,
        bit_depth: SLIM_BITS,
        pixels: image.pixels.iter().map(|p| p >> 4).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum KernelVariant {
    #[default]
    Gx,
    Gy,
    Both,
}

impl KernelVariant {
    pub fn kernels(self) -> Vec<SobelKernel> {
        match self {
            KernelVariant::Gx => vec![SobelKernel::GX],
            KernelVariant::Gy => vec![SobelKernel::GY],
            KernelVariant::Both => vec![SobelKernel::GX, SobelKernel::GY],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelVariant::Gx => "gx",
            KernelVariant::Gy => "gy",
            KernelVariant::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SobelKernel {
    /// `coeffs[dy][dx]` weighs the pixel at `(x + dx - 1, y + dy - 1)`.
    pub coeffs: [[i8; 3]; 3],
}

impl SobelKernel {
    pub const GX: SobelKernel = SobelKernel { coeffs: [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]] };
    pub const GY: SobelKernel = SobelKernel { coeffs: [[-1, -2, -1], [0, 0, 0], [1, 2, 1]] };

    pub fn sum(&self) -> i32 {
        self.coeffs.iter().flatten().map(|c| *c as i32).sum()
    }

    fn taps(&self) -> impl Iterator<Item = (isize, isize, i8)> + '_ {
        (0..3).flat_map(move |dy| (0..3).map(move |dx| (dx as isize - 1, dy as isize - 1, self.coeffs[dy][dx])))
    }

    fn correlate(&self, image: &Image, x: usize, y: usize) -> i32 {
        self.taps().map(|(dx, dy, c)| c as i32 * image.get_padded(x as isize + dx, y as isize + dy) as i32).sum()
    }
}

fn check_size(image: &Image) -> Result<(), SobelError> {
    if image.width < 3 || image.height < 3 {
        return Err(SobelError::Undersized { width: image.width, height: image.height });
    }
    Ok(())
}

/// Integer reference at the image's own bit depth.
pub fn sobel_reference(image: &Image, variant: KernelVariant) -> Result<Image, SobelError> {
    check_size(image)?;
    let max = image.max_value() as i32;
    let kernels = variant.kernels();
    let mut out = Image::filled(image.width, image.height, image.bit_depth, 0);
    for y in 0..image.height {
        for x in 0..image.width {
            let magnitude: i32 = kernels.iter().map(|k| k.correlate(image, x, y).abs()).sum();
            out.pixels[y * image.width + x] = (magnitude >> OUTPUT_SHIFT).min(max) as u8;
        }
    }
    Ok(out)
}

/// Block selected by the borrow of `P - N`: inputs `c, d0..d3, e0..e3`,
/// outputs `y_i = c ? d_i : e_i`.
fn select_netlist() -> NorNetlist {
    let mut b = NetlistBuilder::new();
    let c = b.input("c");
    let d = b.inputs("d", 4);
    let e = b.inputs("e", 4);
    let Signal::Input(ci) = c else { unreachable!() };
    for i in 0..4 {
        let (Signal::Input(di), Signal::Input(ei)) = (d[i], e[i]) else { unreachable!() };
        let take_d = b.nor(Signal::InputNot(ci), Signal::InputNot(di));
        let take_e = b.nor(c, Signal::InputNot(ei));
        let y = b.or(take_d, take_e);
        b.output(alloc::format!("y{i}"), y);
    }
    b.finish().expect("well formed")
}

/// Saturation to 4 bits: inputs `s0..s3, hi`, outputs `y_i = s_i | hi`, one
/// conditional-pulse cell each.
fn saturate_netlist() -> NorNetlist {
    let mut b = NetlistBuilder::new();
    b.inputs("s", 4);
    b.input("hi");
    for i in 0..4 {
        let y = b.cell(Signal::InputNot(i), Signal::InputNot(i), Some(Signal::InputNot(4)));
        b.output(alloc::format!("y{i}"), y);
    }
    b.finish().expect("well formed")
}

/// A compiled block and its batched schedule.
#[derive(Debug, Clone)]
pub struct Block {
    pub netlist: NorNetlist,
    pub batched: Schedule,
    pub profile: OpProfile,
}

impl Block {
    fn compile(
        name: &str,
        netlist: NorNetlist,
        params: &SlimPerfParams,
        batch: usize,
        convention: EventConvention,
    ) -> Result<Block, SobelError> {
        let single = schedule(&netlist, &params.geometry)?;
        let profile = OpProfile::of(name, &single, convention)?;
        let batched = schedule(&netlist.replicate(batch), &params.geometry)?;
        Ok(Block { netlist, batched, profile })
    }

    fn run(&self, array: &mut SlimArray, operands: &[Vec<bool>]) -> Result<Vec<Vec<bool>>, SobelError> {
        let ni = self.netlist.inputs.len();
        let no = self.netlist.outputs.len();
        let copies = self.batched.netlist.inputs.len() / ni;
        debug_assert!(operands.len() <= copies);
        let mut flat = vec![false; ni * copies];
        for (k, x) in operands.iter().enumerate() {
            flat[k * ni..(k + 1) * ni].copy_from_slice(x);
        }
        let out = execute(&self.batched, array, &flat)?;
        array.refresh_policy_tick();
        Ok(out.chunks(no).take(operands.len()).map(<[bool]>::to_vec).collect())
    }
}

/// Compiled blocks for the array path.
#[derive(Debug, Clone)]
pub struct SobelEngine {
    pub batch: usize,
    pub mul: Block,
    /// Low nibble adder (half adder first stage).
    pub add: Block,
    /// High nibble adder with carry in.
    pub add_carry: Block,
    pub select: Block,
    pub saturate: Block,
    pub params: SlimPerfParams,
}

/// Both differences `P - N` and `N - P` of the tap accumulators, with the
/// no-borrow bit of `P - N`.
struct Differences {
    pos_minus: Vec<u8>,
    neg_minus: Vec<u8>,
    no_borrow: Vec<bool>,
}

/// Per-op instance counts executed by [`sobel_slim`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub mul: u64,
    pub add: u64,
    pub add_carry: u64,
    pub select: u64,
    pub saturate: u64,
}

impl SobelEngine {
    pub fn new(params: &SlimPerfParams, convention: EventConvention) -> Result<SobelEngine, SobelError> {
        params.validate()?;
        let batch = params.capacity()?;
        let w = SLIM_BITS as usize;
        Ok(SobelEngine {
            batch,
            mul: Block::compile("MUL4", build_csa_multiplier(w)?, params, batch, convention)?,
            add: Block::compile("ADD4", build_ripple_adder(w)?, params, batch, convention)?,
            add_carry: Block::compile("ADD4C", build_ripple_adder_with_carry(w)?, params, batch, convention)?,
            select: Block::compile("SEL4", select_netlist(), params, batch, convention)?,
            saturate: Block::compile("SAT4", saturate_netlist(), params, batch, convention)?,
            params: params.clone(),
        })
    }

    /// The nominal edge-detection workload: 9 multiplies and 9 additions
    /// of 4 bits per output pixel, one 8-bit result word per pixel.
    pub fn nominal_workload(&self, sobel_ops: u64) -> SlimWorkload {
        SlimWorkload {
            ops: vec![(self.mul.profile.clone(), 9 * sobel_ops), (self.add.profile.clone(), 9 * sobel_ops)],
            results: sobel_ops,
        }
    }

    pub fn workload(&self, counts: &OpCounts, results: u64) -> SlimWorkload {
        let ops = [
            (&self.mul, counts.mul),
            (&self.add, counts.add),
            (&self.add_carry, counts.add_carry),
            (&self.select, counts.select),
            (&self.saturate, counts.saturate),
        ]
        .into_iter()
        .filter(|(_, n)| *n > 0)
        .map(|(b, n)| (b.profile.clone(), n))
        .collect();
        SlimWorkload { ops, results }
    }

    /// `x + y` on 8-bit words, or `x - y` when `subtract`; returns the result
    /// and the carry out of bit 7.
    fn add8(
        &self,
        array: &mut SlimArray,
        x: &[u8],
        y: &[u8],
        subtract: bool,
        counts: &mut OpCounts,
    ) -> Result<(Vec<u8>, Vec<bool>), SobelError> {
        let y: Vec<u8> = if subtract { y.iter().map(|v| !v).collect() } else { y.to_vec() };
        let nibbles = |v: &[u8], shift: u32| -> Vec<Vec<bool>> { v.iter().map(|w| nib(*w >> shift)).collect() };
        let (xl, yl) = (nibbles(x, 0), nibbles(&y, 0));
        let low: Vec<Vec<bool>> = if subtract {
            let ops: Vec<Vec<bool>> = xl.iter().zip(&yl).map(|(a, b)| cat(&[a, b, &[true]])).collect();
            counts.add_carry += x.len() as u64;
            self.add_carry.run(array, &ops)?
        } else {
            let ops: Vec<Vec<bool>> = xl.iter().zip(&yl).map(|(a, b)| cat(&[a, b])).collect();
            counts.add += x.len() as u64;
            self.add.run(array, &ops)?
        };
        let (xh, yh) = (nibbles(x, 4), nibbles(&y, 4));
        let ops: Vec<Vec<bool>> = xh.iter().zip(&yh).zip(&low).map(|((a, b), l)| cat(&[a, b, &[l[4]]])).collect();
        counts.add_carry += x.len() as u64;
        let high = self.add_carry.run(array, &ops)?;
        let words = low.iter().zip(&high).map(|(l, h)| (from_bits(&l[..4]) | from_bits(&h[..4]) << 4) as u8).collect();
        Ok((words, high.iter().map(|h| h[4]).collect()))
    }

    fn differences(
        &self,
        array: &mut SlimArray,
        image: &Image,
        kernel: &SobelKernel,
        positions: &[(usize, usize)],
        counts: &mut OpCounts,
    ) -> Result<Differences, SobelError> {
        let n = positions.len();
        let mut pos = vec![0u8; n];
        let mut neg = vec![0u8; n];
        for (dx, dy, c) in kernel.taps() {
            let ops: Vec<Vec<bool>> = positions
                .iter()
                .map(|&(x, y)| {
                    let p = image.get_padded(x as isize + dx, y as isize + dy);
                    cat(&[&nib(p), &nib(c.unsigned_abs())])
                })
                .collect();
            counts.mul += n as u64;
            let products: Vec<u8> = self.mul.run(array, &ops)?.iter().map(|bits| from_bits(bits) as u8).collect();
            let acc = if c < 0 { &mut neg } else { &mut pos };
            *acc = self.add8(array, acc, &products, false, counts)?.0;
        }
        let (pos_minus, no_borrow) = self.add8(array, &pos, &neg, true, counts)?;
        let (neg_minus, _) = self.add8(array, &neg, &pos, true, counts)?;
        Ok(Differences { pos_minus, neg_minus, no_borrow })
    }

    /// One select pass over the nibble at `shift` of both differences.
    fn select_nibble(
        &self,
        array: &mut SlimArray,
        d: &Differences,
        shift: u32,
        counts: &mut OpCounts,
    ) -> Result<Vec<u8>, SobelError> {
        let n = d.no_borrow.len();
        let ops: Vec<Vec<bool>> = (0..n)
            .map(|k| cat(&[&[d.no_borrow[k]], &nib(d.pos_minus[k] >> shift), &nib(d.neg_minus[k] >> shift)]))
            .collect();
        counts.select += n as u64;
        Ok(self.select.run(array, &ops)?.iter().map(|bits| from_bits(bits) as u8).collect())
    }

    /// Runs the whole image. The image must be 4-bit.
    pub fn run(
        &self,
        image: &Image,
        variant: KernelVariant,
        array: &mut SlimArray,
    ) -> Result<(Image, OpCounts), SobelError> {
        check_size(image)?;
        if image.bit_depth != SLIM_BITS {
            return Err(SobelError::BitDepth { expected: SLIM_BITS, found: image.bit_depth });
        }
        let mut out = Image::filled(image.width, image.height, SLIM_BITS, 0);
        let mut counts = OpCounts::default();
        let positions: Vec<(usize, usize)> =
            (0..image.height).flat_map(|y| (0..image.width).map(move |x| (x, y))).collect();
        for chunk in positions.chunks(self.batch) {
            let values = match variant {
                KernelVariant::Both => self.combine(array, image, chunk, &mut counts)?,
                _ => {
                    let d = self.differences(array, image, &variant.kernels()[0], chunk, &mut counts)?;
                    self.select_nibble(array, &d, OUTPUT_SHIFT, &mut counts)?
                }
            };
            for (&(x, y), v) in chunk.iter().zip(values) {
                out.pixels[y * image.width + x] = v;
            }
        }
        Ok((out, counts))
    }

    /// `min((|Gx| + |Gy|) >> 2, 15)` for a batch.
    fn combine(
        &self,
        array: &mut SlimArray,
        image: &Image,
        positions: &[(usize, usize)],
        counts: &mut OpCounts,
    ) -> Result<Vec<u8>, SobelError> {
        let gx = self.abs_batch(array, image, &SobelKernel::GX, positions, counts)?;
        let gy = self.abs_batch(array, image, &SobelKernel::GY, positions, counts)?;
        let (sum, _) = self.add8(array, &gx, &gy, false, counts)?;
        let ops: Vec<Vec<bool>> = sum
            .iter()
            .map(|s| {
                let mut x = nib(s >> OUTPUT_SHIFT);
                x.push(s >> (OUTPUT_SHIFT + 4) != 0);
                x
            })
            .collect();
        counts.saturate += positions.len() as u64;
        Ok(self.saturate.run(array, &ops)?.iter().map(|bits| from_bits(bits) as u8).collect())
    }

    /// Unshifted `|G|` for a batch, selected a nibble at a time.
    fn abs_batch(
        &self,
        array: &mut SlimArray,
        image: &Image,
        kernel: &SobelKernel,
        positions: &[(usize, usize)],
        counts: &mut OpCounts,
    ) -> Result<Vec<u8>, SobelError> {
        let d = self.differences(array, image, kernel, positions, counts)?;
        let low = self.select_nibble(array, &d, 0, counts)?;
        let high = self.select_nibble(array, &d, 4, counts)?;
        Ok(low.iter().zip(&high).map(|(l, h)| l | h << 4).collect())
    }
}

fn nib(v: u8) -> Vec<bool> {
    to_bits(v as u64 & 0xF, 4).collect()
}

fn cat(parts: &[&[bool]]) -> Vec<bool> {
    parts.concat()
}

/// Edge detection on the array. Returns the output image and the EDP report
/// of the operations actually executed.
pub fn sobel_slim(
    image: &Image,
    variant: KernelVariant,
    array: &mut SlimArray,
    params: &SlimPerfParams,
    convention: EventConvention,
) -> Result<(Image, EdpReport), SobelError> {
    let engine = SobelEngine::new(params, convention)?;
    let (out, counts) = engine.run(image, variant, array)?;
    let pixels = (image.width * image.height) as u64;
    let report = slim_workload_edp(&engine.workload(&counts, pixels), params)?;
    Ok((out, report))
}

/// Header line describing the conventions of the Sobel output.
pub fn convention_note(variant: KernelVariant) -> String {
    alloc::format!("sobel kernel={} border=zero-pad magnitude=|G|>>{} bits={}", variant.name(), OUTPUT_SHIFT, SLIM_BITS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{ArrayGeometry, RefreshPolicy};

    fn array() -> SlimArray {
        SlimArray::new(ArrayGeometry::default(), RefreshPolicy::Lazy).unwrap()
    }

    #[test]
    fn quantize_examples() {
        let img = Image::new(3, 1, 8, vec![255, 0, 37]).unwrap();
        assert_eq!(quantize_4bit(&img).unwrap().pixels, [15, 0, 2]);
        assert!(quantize_4bit(&Image::filled(3, 3, 4, 0)).is_err());
    }

    #[test]
    fn quantize_floor_rule_exhaustive() {
        let img = Image::new(256, 1, 8, (0..=255).collect()).unwrap();
        let q = quantize_4bit(&img).unwrap();
        for k in 0..16u8 {
            for r in 0..16u8 {
                assert_eq!(q.pixels[(16 * k + r) as usize], k);
            }
        }
    }

    #[test]
    fn kernels_sum_to_zero() {
        assert_eq!(SobelKernel::GX.sum(), 0);
        assert_eq!(SobelKernel::GY.sum(), 0);
    }

    #[test]
    fn image_validation() {
        assert_eq!(Image::new(2, 2, 4, vec![0; 3]), Err(SobelError::SizeMismatch));
        assert_eq!(Image::new(1, 1, 4, vec![16]), Err(SobelError::PixelOutOfRange { index: 0, value: 16 }));
        assert!(matches!(
            sobel_reference(&Image::filled(2, 5, 4, 0), KernelVariant::Gx),
            Err(SobelError::Undersized { .. })
        ));
    }

    #[test]
    fn constant_image_interior_is_zero() {
        let img = Image::filled(6, 6, 4, 9);
        let out = sobel_reference(&img, KernelVariant::Both).unwrap();
        for y in 1..5 {
            for x in 1..5 {
                assert_eq!(out.get(x, y), 0);
            }
        }
        let zero = sobel_reference(&Image::filled(6, 6, 4, 0), KernelVariant::Both).unwrap();
        assert!(zero.pixels.iter().all(|p| *p == 0));
    }

    #[test]
    fn single_bright_pixel_imprints_kernel() {
        let mut img = Image::filled(5, 5, 4, 0);
        img.pixels[2 * 5 + 2] = 8;
        let out = sobel_reference(&img, KernelVariant::Gx).unwrap();
        // Response at (2+i, 2+j) is coeff[1-j][1-i] * 8; |.| >> 2.
        let expect = [[2, 0, 2], [4, 0, 4], [2, 0, 2]];
        for (j, row) in expect.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                assert_eq!(out.get(1 + i, 1 + j), *v, "({i},{j})");
            }
        }
        assert_eq!(out.get(0, 0), 0);
    }

    #[test]
    fn vertical_step_peaks_on_edge() {
        let mut img = Image::filled(8, 5, 4, 0);
        for y in 0..5 {
            for x in 4..8 {
                img.pixels[y * 8 + x] = 15;
            }
        }
        let out = sobel_reference(&img, KernelVariant::Gx).unwrap();
        // Interior rows: columns 3 and 4 straddle the step with |G| = 4 * 15.
        for y in 1..4 {
            assert_eq!(out.get(3, y), 15);
            assert_eq!(out.get(4, y), 15);
            assert_eq!(out.get(1, y), 0);
            assert_eq!(out.get(5, y), 0);
        }
    }

    #[test]
    fn select_and_saturate_blocks() {
        let sel = select_netlist();
        assert!(crate::compiler::verify_equivalence(&sel, |x| {
            (0..4).map(|i| if x[0] { x[1 + i] } else { x[5 + i] }).collect()
        })
        .unwrap());
        let sat = saturate_netlist();
        assert_eq!(sat.cell_count(), 4);
        assert!(crate::compiler::verify_equivalence(&sat, |x| (0..4).map(|i| x[i] | x[4]).collect()).unwrap());
    }

    #[test]
    fn slim_matches_reference_small() {
        let pixels: Vec<u8> = (0..36).map(|i| ((i * 7 + 3) % 16) as u8).collect();
        let img = Image::new(6, 6, 4, pixels).unwrap();
        let params = SlimPerfParams::default();
        for variant in [KernelVariant::Gx, KernelVariant::Gy, KernelVariant::Both] {
            let mut arr = array();
            let (out, report) = sobel_slim(&img, variant, &mut arr, &params, EventConvention::ExcludeRefresh).unwrap();
            assert_eq!(out, sobel_reference(&img, variant).unwrap(), "{variant:?}");
            assert!(report.overall_edp > 0.0);
        }
    }

    #[test]
    fn slim_requires_4bit() {
        let mut arr = array();
        let img = Image::filled(4, 4, 8, 0);
        assert!(matches!(
            sobel_slim(&img, KernelVariant::Gx, &mut arr, &SlimPerfParams::default(), EventConvention::ExcludeRefresh),
            Err(SobelError::BitDepth { expected: 4, found: 8 })
        ));
    }
}
