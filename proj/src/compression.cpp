#include "polytok/compression.hpp"

#include <algorithm>
#include <thread>

#include "polytok/error.hpp"
#include "polytok/text_io.hpp"

namespace polytok {

TokenCount count_stream(const Tokenizer& tok, const std::vector<std::string>& documents) {
  TokenCount c;
  for (const auto& d : documents) {
    c.tokens += tok.count_tokens(d);
    c.bytes += d.size();
  }
  if (c.bytes == 0) throw Error(ErrorKind::kEmptyInput, "evaluation stream is empty");
  return c;
}

std::map<std::string, TokenCount> compression(const Tokenizer& tok, const CorpusStore& corpus, unsigned workers) {
  const auto langs = corpus.languages();
  std::vector<TokenCount> counts(langs.size());
  std::vector<std::exception_ptr> errors(langs.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, langs.size()))));
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < langs.size(); i += workers) {
        try {
          counts[i] = count_stream(tok, corpus.documents(langs[i]));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  std::map<std::string, TokenCount> out;
  for (std::size_t i = 0; i < langs.size(); ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const Error& e) {
        throw Error(e.kind(), langs[i] + ": " + e.what());
      }
    }
    out.emplace(langs[i], counts[i]);
  }
  return out;
}

CompressionReport compression_ratio(const Tokenizer& candidate, const Tokenizer& reference,
                                    const CorpusStore& corpus, unsigned workers) {
  const auto cand = compression(candidate, corpus, workers);
  const auto ref = compression(reference, corpus, workers);
  CompressionReport report;
  double sum = 0.0;
  for (const auto& [code, c] : cand) {
    const TokenCount& r = ref.at(code);
    LanguageCompression lc;
    lc.candidate_tpb = c.tokens_per_byte();
    lc.reference_tpb = r.tokens_per_byte();
    lc.ratio = lc.candidate_tpb / lc.reference_tpb;
    lc.bytes_evaluated = c.bytes;
    sum += lc.ratio;
    report.per_language.emplace(code, lc);
  }
  if (report.per_language.empty()) throw Error(ErrorKind::kEmptyInput, "evaluation corpus has no languages");
  report.macro_average_ratio = sum / static_cast<double>(report.per_language.size());
  return report;
}

std::string CompressionReport::to_tsv() const {
  std::string out;
  for (const auto& [code, lc] : per_language) {
    out += code + '\t' + format_real(lc.candidate_tpb) + '\t' + format_real(lc.reference_tpb) + '\t' +
           format_real(lc.ratio) + '\t' + std::to_string(lc.bytes_evaluated) + '\n';
  }
  out += "MACRO\t" + format_real(macro_average_ratio) + '\n';
  return out;
}

}  // namespace polytok
