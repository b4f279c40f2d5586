#include "nsrag/environment.hpp"

#include <fstream>

#include "nsrag/calculator.hpp"
#include "nsrag/errors.hpp"
#include "nsrag/imaging.hpp"
#include "nsrag/ingest.hpp"
#include "nsrag/tokenizer.hpp"

namespace nsrag {

Observation Environment::table_observation(ResultTable table) {
  Observation obs;
  obs.kind = Observation::Kind::Table;
  obs.table = std::move(table);
  obs.rendered = truncate_tokens(format_observation(obs.table, cfg_.observation_format),
                                 cfg_.per_turn_token_budget);
  obs.token_count = static_cast<std::int64_t>(count_tokens(obs.rendered));
  return obs;
}

Observation Environment::error_observation(const std::string& message) {
  Observation obs;
  obs.kind = Observation::Kind::Error;
  obs.error = message;
  obs.rendered = truncate_tokens("[ERROR] " + message, cfg_.per_turn_token_budget);
  obs.token_count = static_cast<std::int64_t>(count_tokens(obs.rendered));
  return obs;
}

Observation Environment::view_image(const std::string& paper_id, int page_number,
                                    const std::vector<double>& bounding_box) {
  if (!cfg_.vision_capable) {
    return error_observation("vision not supported by current model");
  }
  if (!db_.has_paper(paper_id)) {
    raise(ErrorKind::UnknownPaper, "paper '" + paper_id + "' is not in the store");
  }
  std::string escaped;
  for (char c : paper_id) {
    escaped += c;
    if (c == '\'') escaped += '\'';
  }
  ResultTable pages = db_.execute_readonly_sql(
      "SELECT count(*) FROM pages WHERE paper_id = '" + escaped + "'", 1, cfg_.sql_timeout_ms);
  std::int64_t page_count = pages.rows.at(0).at(0).as_int();
  if (page_number < 1 || page_number > page_count) {
    raise(ErrorKind::PageOutOfRange,
          "page " + std::to_string(page_number) + " of a " + std::to_string(page_count) +
              "-page paper");
  }
  std::string path = raster_path(cfg_.raster_dir, paper_id, page_number);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorKind::NotFound,
          "no page raster stored for paper '" + paper_id + "' page " +
              std::to_string(page_number));
  }
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Observation obs;
  obs.kind = Observation::Kind::Image;
  int width = 0, height = 0;
  if (bounding_box.empty()) {
    Image page = decode_png(bytes);
    width = page.width;
    height = page.height;
    obs.image_png_base64 = base64_encode(bytes);
  } else {
    Image page = decode_png(bytes);
    Image cut = crop(page, static_cast<int>(bounding_box[0]), static_cast<int>(bounding_box[1]),
                     static_cast<int>(bounding_box[2]), static_cast<int>(bounding_box[3]));
    width = cut.width;
    height = cut.height;
    obs.image_png_base64 = base64_encode(encode_png(cut));
  }
  obs.rendered = "[Image] " + std::to_string(width) + "x" + std::to_string(height) +
                 " PNG crop of paper '" + paper_id + "' page " + std::to_string(page_number) +
                 ", attached to this message.";
  obs.token_count = kImageObservationTokens;
  return obs;
}

Observation Environment::step(const Action& action) {
  try {
    switch (action.type()) {
      case ActionType::RetrieveFromVectorstore: {
        if (!store_) {
          return error_observation("no vectorstore is attached to this environment");
        }
        const auto& a = action.as<RetrieveFromVectorstore>();
        SearchRequest request{a.collection_name, a.query, a.table_name,
                              a.column_name, a.filter, static_cast<int>(a.limit)};
        return table_observation(store_->search(request, db_.catalog()));
      }
      case ActionType::RetrieveFromDatabase: {
        const auto& a = action.as<RetrieveFromDatabase>();
        return table_observation(
            db_.execute_readonly_sql(a.sql, cfg_.sql_row_cap, cfg_.sql_timeout_ms));
      }
      case ActionType::CalculateExpr: {
        Observation obs;
        obs.kind = Observation::Kind::Scalar;
        obs.scalar = render_calc_result(calculate_expr(action.as<CalculateExpr>().expr));
        obs.rendered = obs.scalar;
        obs.token_count = static_cast<std::int64_t>(count_tokens(obs.rendered));
        return obs;
      }
      case ActionType::ViewImage: {
        const auto& a = action.as<ViewImage>();
        return view_image(a.paper_id, static_cast<int>(a.page_number), a.bounding_box);
      }
      case ActionType::GenerateAnswer: {
        Observation obs;
        obs.kind = Observation::Kind::Terminal;
        obs.answer = action.as<GenerateAnswer>().answer;
        return obs;
      }
    }
    return error_observation("unhandled action");
  } catch (const Error& e) {
    return error_observation(e.what());
  } catch (const std::exception& e) {
    return error_observation(std::string("internal error: ") + e.what());
  }
}

}  // namespace nsrag
