// inr-stego: hide a signal inside the weights of an implicit neural
// representation and export them as an ordinary RGB image.
//
//   inr-stego keygen   --modality video --dims 4 32 32 --cover-side 64 --seed 7 --out k.json
//   inr-stego hide     --key k.json --secret frames/ --cover cover.png --out container.png
//   inr-stego reveal   --key k.json --container container.png --out revealed/
//   inr-stego evaluate --modality video --cover cover.png --container container.png
//                      --secret frames/ --revealed revealed/
//   inr-stego make-fixtures --out fixtures/

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "inr_stego/commands.hpp"
#include "inr_stego/error.hpp"
#include "inr_stego/fixtures.hpp"

namespace {

using namespace inr_stego;

Modality modality_from(const std::string& text) {
  try {
    return parse_modality(text);
  } catch (const UsageError& e) {
    throw CLI::ValidationError("--modality", e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steganography in implicit neural representation weights"};
  app.require_subcommand(1);

  std::string modality = "video";

  KeygenOptions keygen;
  auto* keygen_cmd = app.add_subcommand("keygen", "Write a key file and print its fingerprint");
  keygen_cmd->add_option("--modality", modality, "video, image or audio")->capture_default_str();
  keygen_cmd->add_option("--dims", keygen.dims, "Secret dims: T H W, H W or S")->required();
  keygen_cmd->add_option("--cover-side", keygen.cover_side, "Cover side N (= hidden width)")
      ->capture_default_str();
  keygen_cmd->add_option("--seed", keygen.seed, "Seed of the pre-defined weights")
      ->capture_default_str();
  keygen_cmd->add_option("--out", keygen.out, "Key file to write")->required();

  HideOptions hide;
  std::size_t steps = 0;
  bool no_qat = false;
  auto* hide_cmd = app.add_subcommand("hide", "Train a container image that hides the secret");
  hide_cmd->add_option("--key", hide.key)->required();
  hide_cmd->add_option("--secret", hide.secret, "Frame directory, PNG or WAV")->required();
  hide_cmd->add_option("--cover", hide.cover, "N×N 8-bit RGB PNG")->required();
  hide_cmd->add_option("--out", hide.out, "Container PNG to write")->required();
  auto* steps_opt = hide_cmd->add_option("--steps", steps, "Default 5000 (20000 for audio)");
  hide_cmd->add_option("--batch-size", hide.train.batch_size)->capture_default_str();
  hide_cmd->add_option("--lr", hide.train.alpha)->capture_default_str();
  hide_cmd->add_option("--beta", hide.train.beta, "Cover loss weight")->capture_default_str();
  hide_cmd->add_option("--seed", hide.train.seed, "Minibatch shuffle seed")->capture_default_str();
  hide_cmd->add_flag("--no-qat", no_qat, "Train float weights, quantize once at export");
  hide_cmd->add_option("--log-every", hide.train.log_every)->capture_default_str();
  std::string report;
  hide_cmd->add_option("--report", report, "Training report (default <out>.report.txt)");

  RevealOptions reveal;
  auto* reveal_cmd = app.add_subcommand("reveal", "Reconstruct the secret from a container");
  reveal_cmd->add_option("--key", reveal.key)->required();
  reveal_cmd->add_option("--container", reveal.container)->required();
  reveal_cmd->add_option("--out", reveal.out, "Frame directory, PNG or WAV to write")->required();

  EvaluateOptions evaluate;
  std::string cover, container, secret, revealed;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Print cover and secret fidelity rows");
  evaluate_cmd->add_option("--modality", modality)->capture_default_str();
  evaluate_cmd->add_option("--cover", cover);
  evaluate_cmd->add_option("--container", container);
  evaluate_cmd->add_option("--secret", secret);
  evaluate_cmd->add_option("--revealed", revealed);

  std::string fixtures_dir;
  auto* fixtures_cmd = app.add_subcommand("make-fixtures", "Write the bundled synthetic media");
  fixtures_cmd->add_option("--out", fixtures_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*keygen_cmd) {
      keygen.modality = modality_from(modality);
      return cmd_keygen(keygen, std::cout, std::cerr);
    }
    if (*hide_cmd) {
      if (*steps_opt) hide.steps = steps;
      hide.train.qat = !no_qat;
      if (!report.empty()) hide.report = report;
      return cmd_hide(hide, std::cout, std::cerr);
    }
    if (*reveal_cmd) return cmd_reveal(reveal, std::cout, std::cerr);
    if (*evaluate_cmd) {
      evaluate.modality = modality_from(modality);
      if (!cover.empty()) evaluate.cover = cover;
      if (!container.empty()) evaluate.container = container;
      if (!secret.empty()) evaluate.secret = secret;
      if (!revealed.empty()) evaluate.revealed = revealed;
      return cmd_evaluate(evaluate, std::cout, std::cerr);
    }
    if (*fixtures_cmd) {
      write_fixture_set(fixtures_dir);
      std::cout << "fixtures written to " << fixtures_dir << "\n";
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const inr_stego::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
