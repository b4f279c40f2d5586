#include "nsrag/encode.hpp"

#include <algorithm>
#include <fstream>

#include "nsrag/errors.hpp"
#include "nsrag/imaging.hpp"
#include "nsrag/ingest.hpp"

namespace nsrag {

namespace {

bool wanted(const EncodeConfig& cfg, const std::string& name) {
  if (cfg.collections.empty()) return true;
  return std::find(cfg.collections.begin(), cfg.collections.end(), name) !=
         cfg.collections.end();
}

VectorEntry base_entry(const EncodableCell& cell) {
  VectorEntry entry;
  entry.pdf_id = cell.pdf_id;
  entry.page_number = cell.page_number;
  entry.table_name = cell.table_name;
  entry.column_name = cell.column_name;
  entry.primary_key = cell.primary_key;
  return entry;
}

/// PNG bytes of the cell's crop, or a deterministic placeholder when the
/// page raster was not part of the bundle.
std::string crop_bytes(const EncodableCell& cell, const EncodeConfig& cfg) {
  std::string path = raster_path(cfg.raster_dir, cell.pdf_id, cell.page_number);
  std::ifstream probe(path, std::ios::binary);
  if (!probe) {
    return "no-raster:" + cell.pdf_id + ":" + std::to_string(cell.page_number) + ":" +
           cell.payload.to_literal_text();
  }
  Image page = read_png_file(path);
  const auto& box = cell.payload.as_list();
  Image cut = crop(page, static_cast<int>(box[0].as_int()), static_cast<int>(box[1].as_int()),
                   static_cast<int>(box[2].as_int()), static_cast<int>(box[3].as_int()));
  return encode_png(cut);
}

}  // namespace

VectorStore build_vector_store(Database& db, Gateway& gateway, const EncodeConfig& cfg) {
  VectorStore store = VectorStore::with_default_collections();
  auto cells = db.enumerate_encodable_cells();

  std::vector<const EncodableCell*> text_cells;
  std::vector<const EncodableCell*> image_cells;
  for (const auto& cell : cells) {
    (cell.payload.is_list() ? image_cells : text_cells).push_back(&cell);
  }

  for (const auto& col : store.collections()) {
    if (!wanted(cfg, col.name)) continue;
    std::vector<VectorEntry> entries;

    if (col.encoder == EncoderKind::Bm25) {
      std::vector<std::string> documents;
      documents.reserve(text_cells.size());
      for (const auto* cell : text_cells) documents.push_back(cell->payload.as_string());
      Bm25Stats stats = build_bm25_stats(documents);
      for (const auto* cell : text_cells) {
        VectorEntry entry = base_entry(*cell);
        entry.text = cell->payload.as_string();
        entry.sparse = encode_bm25_document(entry.text, stats);
        entries.push_back(std::move(entry));
      }
      store.set_bm25_stats(col.name, std::move(stats));
    } else if (col.encoder == EncoderKind::DenseApi) {
      std::vector<std::string> texts;
      texts.reserve(text_cells.size());
      for (const auto* cell : text_cells) texts.push_back(cell->payload.as_string());
      std::vector<std::vector<float>> vectors;
      if (cfg.standin_embeddings) {
        vectors.reserve(texts.size());
        for (const auto& t : texts) vectors.push_back(standin_embed_text(col.model_id, t));
      } else if (!texts.empty()) {
        vectors = gateway.embed(col.model_id, texts);
      }
      for (size_t i = 0; i < text_cells.size(); i++) {
        VectorEntry entry = base_entry(*text_cells[i]);
        entry.text = texts[i];
        entry.dense = vectors[i];
        entries.push_back(std::move(entry));
      }
    } else {
      for (const auto* cell : image_cells) {
        VectorEntry entry = base_entry(*cell);
        entry.text = "";
        entry.dense = standin_embed_bytes(col.model_id, crop_bytes(*cell, cfg));
        entries.push_back(std::move(entry));
      }
    }
    store.insert_entries(col.name, std::move(entries), &db);
  }

  attach_text_embedder(store, gateway, cfg.standin_embeddings);
  return store;
}

void attach_text_embedder(VectorStore& store, Gateway& gateway, bool standin) {
  if (standin) {
    store.set_text_embedder([](const std::string& model, const std::string& text) {
      return standin_embed_text(model, text);
    });
  } else {
    store.set_text_embedder([&gateway](const std::string& model, const std::string& text) {
      return gateway.embed(model, {text}).at(0);
    });
  }
}

}  // namespace nsrag
