#pragma once

// Small synthetic media used by tests, the acceptance suite and
// `inr-stego make-fixtures`. Everything is closed-form, so no binary assets
// ship with the repository.

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "inr_stego/image.hpp"
#include "inr_stego/signals.hpp"
#include "inr_stego/wav.hpp"

namespace inr_stego {

/// Square RGB cover: sky gradient, sun, wavy hill line and textured ground.
Image make_landscape_cover(std::size_t side);

/// T frames of H×W: a drifting disc and a sliding square over smooth
/// gradients. Samples lie on the 8-bit lattice.
SecretSignal make_moving_shapes_video(std::size_t frames, std::size_t height, std::size_t width);

/// H×W still image (frame 0 of the moving-shapes video).
SecretSignal make_test_image(std::size_t height, std::size_t width);

/// Two decaying partials; samples on the 16-bit lattice.
SecretSignal make_tone_audio(std::size_t samples, std::uint32_t sample_rate);

/// Writes cover.png, video/frame_NNNN.png, image.png and tone.wav at the
/// desk-scale sizes (64 cover, 4×32×32 video).
void write_fixture_set(const std::filesystem::path& directory);

}  // namespace inr_stego
