// SPDX-License-Identifier: Apache-2.0
//
// Authors the bundled synthetic suite: three fake apps, their screens and
// screenshots, reference trajectories, evaluators, probe files, UTGs, and
// the recorded response cache used by the offline regression run.
//
// Output is fully deterministic so the committed fixtures can be
// regenerated and diffed.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uinav/agent.hpp"
#include "uinav/json_util.hpp"
#include "uinav/raster.hpp"
#include "uinav/report.hpp"

using namespace uinav;

namespace {

constexpr int kW = 1080;
constexpr int kH = 1920;

// ---- node builders ------------------------------------------------------

UINode node(const std::string& cls, Rect b) {
  UINode n;
  n.class_name = cls;
  n.bounds = b;
  n.visible = true;
  n.enabled = true;
  return n;
}

UINode frame(Rect b, std::vector<UINode> kids) {
  UINode n = node("android.widget.FrameLayout", b);
  n.children = std::move(kids);
  return n;
}

UINode group(Rect b, std::vector<UINode> kids) {
  UINode n = node("android.widget.LinearLayout", b);
  n.children = std::move(kids);
  return n;
}

UINode label(const std::string& text, Rect b, const std::string& id = "") {
  UINode n = node("android.widget.TextView", b);
  n.text = text;
  n.resource_id = id;
  return n;
}

UINode button(const std::string& text, const std::string& id, Rect b,
              const std::string& desc = "") {
  UINode n = node("android.widget.Button", b);
  n.text = text;
  n.resource_id = id;
  n.content_desc = desc;
  n.clickable = true;
  return n;
}

UINode tab(const std::string& text, const std::string& id, Rect b) {
  UINode n = node("android.widget.TextView", b);
  n.text = text;
  n.resource_id = id;
  n.clickable = true;
  return n;
}

UINode icon(const std::string& desc, const std::string& id, Rect b) {
  UINode n = node("android.widget.ImageButton", b);
  n.content_desc = desc;
  n.resource_id = id;
  n.clickable = true;
  return n;
}

UINode field(const std::string& id, const std::string& desc,
             const std::string& text, Rect b) {
  UINode n = node("android.widget.EditText", b);
  n.resource_id = id;
  n.content_desc = desc;
  n.text = text;
  n.editable = true;
  n.clickable = true;
  return n;
}

UINode list(const std::string& id, Rect b, std::vector<UINode> kids) {
  UINode n = node("androidx.recyclerview.widget.RecyclerView", b);
  n.resource_id = id;
  n.scrollable = true;
  n.children = std::move(kids);
  return n;
}

UINode row(const std::string& text, const std::string& id, Rect b,
           bool long_clickable = false) {
  UINode n = node("android.widget.LinearLayout", b);
  n.text = text;
  n.resource_id = id;
  n.clickable = true;
  n.long_clickable = long_clickable;
  return n;
}

// ---- screenshot synthesis -----------------------------------------------

uint32_t tone_for(const UINode& n) {
  if (n.editable) return 0xfff3d6ffu;
  if (n.clickable || n.long_clickable) return 0xaecbfaffu;
  if (n.scrollable) return 0xe8efe8ffu;
  if (!n.text.empty()) return 0xd9d9d9ffu;
  return 0xf5f5f5ffu;
}

Image render_screenshot(const UIScreen& screen) {
  Image image(screen.width, screen.height, 0xffffffffu);
  visit_preorder(screen.root, [&](const UINode& n, int) {
    fill_rect(image, n.bounds.left, n.bounds.top, n.bounds.right,
              n.bounds.bottom, tone_for(n));
  });
  return image;
}

// ---- evaluator JSON builders ---------------------------------------------

json clause(const std::string& f, const std::string& mode,
            const std::string& value) {
  return json{{"field", f}, {"mode", mode}, {"value", value}};
}

json stop_page(std::vector<json> clauses) {
  return json{{"assert", "stop_page"}, {"element", clauses}};
}

json find_element(std::vector<json> clauses) {
  return json{{"assert", "find_element"}, {"element", clauses}};
}

json find_action(json pattern) {
  return json{{"assert", "find_action"}, {"action", std::move(pattern)}};
}

json find_element_by_action(std::vector<json> clauses, json pattern) {
  return json{{"assert", "find_element_by_action"},
              {"element", clauses},
              {"action", std::move(pattern)}};
}

json last_action(json pattern) {
  return json{{"assert", "last_action"}, {"action", std::move(pattern)}};
}

json evaluator(const std::string& order, std::vector<json> nodes) {
  return json{{"order", order}, {"list", nodes}};
}

json click_on(std::vector<json> target) {
  return json{{"verb", "click"}, {"target", target}};
}

json longclick_on(std::vector<json> target) {
  return json{{"verb", "longclick"}, {"target", target}};
}

json typed(const std::string& mode, const std::string& value) {
  return json{{"verb", "text"},
              {"payload", {{"mode", mode}, {"value", value}}}};
}

json swiped(const std::string& direction) {
  return json{{"verb", "swipe"}, {"direction", direction}};
}

json pressed(const std::string& key) {
  return json{{"verb", "press"}, {"key", key}};
}

// ---- generator state -----------------------------------------------------

struct Generator {
  std::filesystem::path out;    // fixtures root
  std::filesystem::path suite;  // fixtures/suite
  std::map<std::string, UIScreen> screens;
  json manifest_tasks = json::array();
  std::vector<std::string> task_order;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>>
      references;  // task -> (screen name, rendered action), no stop
  std::map<std::string, std::string> final_screens;
  std::map<std::string, std::string> task_apps;
  std::map<std::string, std::string> task_instructions;

  static std::string screen_ref(const std::string& name) {
    return "screens/" + name + ".json";
  }

  void add_screen(const std::string& name, UINode root,
                  const std::string& activity) {
    UIScreen screen;
    screen.root = std::move(root);
    screen.width = kW;
    screen.height = kH;
    screen.activity_tag = activity;
    screen.screenshot_ref = "screenshots/" + name + ".png";
    screens[name] = std::move(screen);
  }

  const UIScreen& get(const std::string& name) const {
    return screens.at(name);
  }

  void write_screens() const {
    for (const auto& [name, screen] : screens) {
      write_text_file(suite / screen_ref(name), save_screen(screen));
      write_binary_file(suite / screen.screenshot_ref,
                        encode_png(render_screenshot(screen)));
    }
  }

  Trajectory make_reference(const std::string& task_id) const {
    const auto& actions = references.at(task_id);
    const std::string& final_name = final_screens.at(task_id);
    Trajectory t;
    t.task_id = task_id;
    t.app_id = task_apps.at(task_id);
    t.stop_reason = StopReason::agent_stop;
    auto push = [&](const std::string& screen_name,
                    const std::string& rendered) {
      Step step;
      step.screen = get(screen_name);
      step.screen_ref = screen_ref(screen_name);
      step.raw_model_output = rendered;
      step.action = std::get<Action>(parse_action(rendered));
      step.normalized_key = action_key(*step.action, step.screen);
      t.steps.push_back(std::move(step));
    };
    for (const auto& [screen_name, rendered] : actions)
      push(screen_name, rendered);
    push(final_name, "press [stop]");
    t.final_screen = get(final_name);
    t.final_screen_ref = screen_ref(final_name);
    return t;
  }

  void add_task(const std::string& id, const std::string& app,
                const std::string& category, const std::string& instruction,
                std::vector<std::pair<std::string, std::string>> actions,
                const std::string& final_screen,
                const std::vector<json>& evaluators) {
    task_apps[id] = app;
    task_instructions[id] = instruction;
    references[id] = std::move(actions);
    final_screens[id] = final_screen;
    task_order.push_back(id);

    json task;
    task["format_version"] = 1;
    task["id"] = id;
    task["app_id"] = app;
    task["instruction"] = instruction;
    task["category"] = category;
    task["reference_trajectory"] = "trajectories/" + id + ".jsonl";
    json evaluator_refs = json::array();
    for (size_t i = 0; i < evaluators.size(); ++i) {
      std::string ref =
          "evaluators/" + id + "_e" + std::to_string(i) + ".json";
      evaluator_refs.push_back(ref);
      json doc = evaluators[i];
      doc["format_version"] = 1;
      write_text_file(suite / ref, doc.dump(2) + "\n");
    }
    task["evaluators"] = std::move(evaluator_refs);
    write_text_file(suite / ("tasks/" + id + ".json"), task.dump(2) + "\n");
    manifest_tasks.push_back("tasks/" + id + ".json");

    save_trajectory(make_reference(id),
                    suite / ("trajectories/" + id + ".jsonl"));
  }
};

// ---- app: shoplite ---------------------------------------------------------

void build_shoplite(Generator& gen) {
  auto home_root = [&](const std::string& query) {
    return frame(
        {0, 0, kW, kH},
        {group({0, 0, kW, 160},
               {label("ShopLite", {40, 40, 400, 120}, "shoplite:id/title"),
                icon("Cart", "shoplite:id/cart", {900, 20, 1060, 140})}),
         group({0, 160, kW, 300},
               {field("shoplite:id/search_input", "Search products", query,
                      {40, 180, 820, 280}),
                button("Search", "shoplite:id/search_btn",
                       {840, 180, 1040, 280})}),
         list("shoplite:id/featured", {0, 300, kW, 1800},
              {label("Daily deals", {40, 320, 1040, 400}),
               label("Free shipping on mugs this week",
                     {40, 420, 1040, 500})})});
  };
  gen.add_screen("shoplite_home", home_root(""), "shoplite/Home");
  gen.add_screen("shoplite_home_q_blue", home_root("blue mug"),
                 "shoplite/Home");
  gen.add_screen("shoplite_home_q_travel", home_root("travel mug"),
                 "shoplite/Home");
  gen.add_screen("shoplite_home_q_esp", home_root("espresso cup"),
                 "shoplite/Home");

  auto results = [&](const std::string& query,
                     std::vector<std::string> names) {
    std::vector<UINode> rows;
    int y = 200;
    for (size_t i = 0; i < names.size(); ++i) {
      rows.push_back(row(names[i], "shoplite:id/item_" + std::to_string(i),
                         {40, y, 1040, y + 160}));
      y += 200;
    }
    return frame({0, 0, kW, kH},
                 {label("Results for " + query, {40, 40, 1040, 120},
                        "shoplite:id/results_header"),
                  list("shoplite:id/results", {0, 160, kW, 1800},
                       std::move(rows))});
  };
  gen.add_screen("shoplite_results_blue",
                 results("blue mug", {"Blue Mug", "Navy Mug", "Sky Mug"}),
                 "shoplite/Results");
  gen.add_screen(
      "shoplite_results_travel",
      results("travel mug", {"Mug Rack", "Mug Set", "Steel Flask"}),
      "shoplite/Results");
  gen.add_screen(
      "shoplite_results_travel2",
      results("travel mug", {"Travel Mug", "Thermo Mug", "Lid Pack"}),
      "shoplite/Results");
  gen.add_screen(
      "shoplite_results_esp",
      results("espresso cup", {"Cup Stand", "Saucer Set", "Grinder"}),
      "shoplite/Results");
  gen.add_screen(
      "shoplite_results_esp2",
      results("espresso cup", {"Espresso Cup", "Demitasse Duo", "Crema Kit"}),
      "shoplite/Results");

  auto product = [&](const std::string& name, const std::string& price) {
    return frame(
        {0, 0, kW, kH},
        {label(name, {40, 40, 1040, 140}, "shoplite:id/product_title"),
         label(price, {40, 160, 400, 240}, "shoplite:id/price"),
         label("Hand washed. Ships in two days.", {40, 260, 1040, 340}),
         button("Add to cart", "shoplite:id/add_to_cart",
                {40, 1650, 1040, 1780})});
  };
  gen.add_screen("shoplite_product_blue", product("Blue Mug", "$14.00"),
                 "shoplite/Product");
  gen.add_screen("shoplite_product_travel", product("Travel Mug", "$22.00"),
                 "shoplite/Product");
  gen.add_screen("shoplite_product_esp", product("Espresso Cup", "$9.00"),
                 "shoplite/Product");

  gen.add_screen(
      "shoplite_preview_blue",
      frame({0, 0, kW, kH},
            {label("Quick view", {140, 600, 940, 700},
                   "shoplite:id/preview_title"),
             label("Blue Mug, stoneware, 350 ml", {140, 720, 940, 800}),
             button("Open full page", "shoplite:id/preview_open",
                    {140, 900, 940, 1000})}),
      "shoplite/Preview");

  auto cart = [&](const std::string& item) {
    return frame(
        {0, 0, kW, kH},
        {label("Your cart", {40, 40, 600, 120}, "shoplite:id/cart_header"),
         label("1 item", {640, 40, 1040, 120}, "shoplite:id/cart_count"),
         row(item + " x1", "shoplite:id/cart_row_0", {40, 200, 1040, 360}),
         button("Checkout", "shoplite:id/checkout", {40, 1650, 1040, 1780})});
  };
  gen.add_screen("shoplite_cart_blue", cart("Blue Mug"), "shoplite/Cart");
  gen.add_screen("shoplite_cart_travel", cart("Travel Mug"), "shoplite/Cart");
  gen.add_screen("shoplite_cart_esp", cart("Espresso Cup"), "shoplite/Cart");

  auto checkout = [&](const std::string& item, const std::string& addr) {
    return frame(
        {0, 0, kW, kH},
        {label("Checkout", {40, 40, 600, 120}, "shoplite:id/checkout_header"),
         label(item + " x1", {40, 200, 1040, 280}),
         field("shoplite:id/address", "Delivery address", addr,
               {40, 400, 1040, 520}),
         button("Place order", "shoplite:id/place_order",
                {40, 1650, 1040, 1780})});
  };
  gen.add_screen("shoplite_checkout_blue", checkout("Blue Mug", ""),
                 "shoplite/Checkout");
  gen.add_screen("shoplite_checkout_blue_filled",
                 checkout("Blue Mug", "12 Main St"), "shoplite/Checkout");
  gen.add_screen("shoplite_checkout_esp", checkout("Espresso Cup", ""),
                 "shoplite/Checkout");
  gen.add_screen("shoplite_checkout_esp_filled",
                 checkout("Espresso Cup", "45 Oak Ave"), "shoplite/Checkout");

  auto receipt = [&](const std::string& item, const std::string& number) {
    return frame(
        {0, 0, kW, kH},
        {label("Order confirmed", {40, 40, 1040, 140},
               "shoplite:id/receipt_header"),
         label("Receipt #" + number, {40, 200, 600, 280}),
         label(item + " x1", {40, 320, 1040, 400}),
         button("Back to shop", "shoplite:id/back_to_shop",
                {40, 1650, 1040, 1780})});
  };
  gen.add_screen("shoplite_receipt_blue", receipt("Blue Mug", "1001"),
                 "shoplite/Receipt");
  gen.add_screen("shoplite_receipt_esp", receipt("Espresso Cup", "1002"),
                 "shoplite/Receipt");

  gen.add_task(
      "shop_buy_blue_mug", "shoplite", "user",
      "Search ShopLite for a blue mug and order it to 12 Main St.",
      {{"shoplite_home", "text [1] [blue mug]"},
       {"shoplite_home_q_blue", "click [2]"},
       {"shoplite_results_blue", "click [1]"},
       {"shoplite_product_blue", "click [0]"},
       {"shoplite_cart_blue", "click [1]"},
       {"shoplite_checkout_blue", "text [0] [12 Main St]"},
       {"shoplite_checkout_blue_filled", "click [1]"}},
      "shoplite_receipt_blue",
      {evaluator("presence",
                 {stop_page({clause("text", "contains", "Order confirmed")})}),
       evaluator(
           "sequential",
           {find_action(typed("contains", "blue mug")),
            find_action(click_on({clause("text", "exact", "Add to cart")})),
            find_action(click_on({clause("text", "exact", "Place order")}))}),
       evaluator("presence",
                 {find_element({clause("text", "exact", "Blue Mug")})})});

  gen.add_task(
      "shop_cart_travel_mug", "shoplite", "testing",
      "Verify that adding the travel mug to the cart shows one item in the "
      "cart.",
      {{"shoplite_home", "text [1] [travel mug]"},
       {"shoplite_home_q_travel", "click [2]"},
       {"shoplite_results_travel", "swipe [0] [up]"},
       {"shoplite_results_travel2", "click [1]"},
       {"shoplite_product_travel", "click [0]"}},
      "shoplite_cart_travel",
      {evaluator(
           "consecutive",
           {find_action(swiped("up")),
            find_action(click_on({clause("text", "exact", "Travel Mug")}))}),
       evaluator("presence",
                 {stop_page({clause("text", "exact", "1 item")})})});

  gen.add_task(
      "shop_preview_blue_mug", "shoplite", "user",
      "Preview the blue mug with a long press, then open its full product "
      "page.",
      {{"shoplite_home", "text [1] [blue mug]"},
       {"shoplite_home_q_blue", "click [2]"},
       {"shoplite_results_blue", "longclick [1]"},
       {"shoplite_preview_blue", "press [back]"},
       {"shoplite_results_blue", "click [1]"}},
      "shoplite_product_blue",
      {evaluator(
           "sequential",
           {find_action(longclick_on({clause("text", "exact", "Blue Mug")})),
            find_action(click_on({clause("text", "exact", "Blue Mug")}))}),
       evaluator("presence",
                 {stop_page({clause("resource_id", "contains",
                                    "product_title"),
                             clause("text", "exact", "Blue Mug")})}),
       evaluator("presence",
                 {last_action(click_on({clause("text", "exact",
                                               "Blue Mug")}))}),
       evaluator("presence", {find_action(typed("contains", "blue mug"))})});

  gen.add_task(
      "shop_order_espresso", "shoplite", "testing",
      "Verify the full order flow for the espresso cup: search for it, open "
      "it from the scrolled results, add it to the cart, check out to 45 Oak "
      "Ave and confirm the receipt.",
      {{"shoplite_home", "text [1] [espresso cup]"},
       {"shoplite_home_q_esp", "click [2]"},
       {"shoplite_results_esp", "swipe [0] [up]"},
       {"shoplite_results_esp2", "click [1]"},
       {"shoplite_product_esp", "click [0]"},
       {"shoplite_cart_esp", "click [1]"},
       {"shoplite_checkout_esp", "text [0] [45 Oak Ave]"},
       {"shoplite_checkout_esp_filled", "click [1]"}},
      "shoplite_receipt_esp",
      {evaluator("presence",
                 {stop_page({clause("text", "contains", "Order confirmed")})}),
       evaluator("presence",
                 {stop_page({clause("text", "contains", "Espresso Cup")})}),
       evaluator(
           "sequential",
           {find_action(typed("contains", "espresso")),
            find_action(swiped("up")),
            find_action(click_on({clause("text", "exact", "Add to cart")})),
            find_action(click_on({clause("text", "exact",
                                         "Place order")}))})});
}

// ---- app: newsflash --------------------------------------------------------

void build_newsflash(Generator& gen) {
  auto home = [&](std::vector<std::string> headlines) {
    std::vector<UINode> rows;
    int y = 340;
    for (const std::string& headline : headlines) {
      rows.push_back(label(headline, {40, y, 1040, y + 120}));
      y += 160;
    }
    return frame(
        {0, 0, kW, kH},
        {group({0, 0, kW, 160},
               {label("NewsFlash", {40, 40, 360, 120}, "nf:id/title"),
                icon("Search", "nf:id/search_icon", {940, 20, 1060, 140})}),
         group({0, 160, kW, 300},
               {tab("Top", "nf:id/tab_top", {40, 180, 260, 280}),
                tab("Politics", "nf:id/tab_politics", {280, 180, 520, 280}),
                tab("Tech", "nf:id/tab_tech", {540, 180, 760, 280}),
                tab("Saved", "nf:id/tab_saved", {780, 180, 1000, 280})}),
         list("nf:id/headlines", {0, 300, kW, 1800}, std::move(rows))});
  };
  gen.add_screen("nf_home",
                 home({"Morning briefing", "Markets open higher",
                       "Storm watch tonight"}),
                 "newsflash/Home");
  gen.add_screen("nf_home2",
                 home({"Storm watch tonight", "Transit strike ends",
                       "Local marathon recap"}),
                 "newsflash/Home");

  auto section = [&](const std::string& name, const std::string& header_id,
                     std::vector<std::string> stories) {
    std::vector<UINode> rows;
    int y = 200;
    for (size_t i = 0; i < stories.size(); ++i) {
      rows.push_back(row(stories[i], "nf:id/story_" + std::to_string(i),
                         {40, y, 1040, y + 140}));
      y += 180;
    }
    return frame({0, 0, kW, kH},
                 {label(name, {40, 40, 600, 120}, header_id),
                  list("nf:id/section_list", {0, 160, kW, 1800},
                       std::move(rows))});
  };
  gen.add_screen("nf_politics",
                 section("Politics", "nf:id/politics_header",
                         {"Election Roundup", "Budget Vote Today",
                          "City Council Notes"}),
                 "newsflash/Section");
  gen.add_screen("nf_politics2",
                 section("Politics", "nf:id/politics_header",
                         {"Election Roundup", "Senate Recap",
                          "Polling Explained"}),
                 "newsflash/Section");
  gen.add_screen("nf_tech",
                 section("Tech", "nf:id/tech_header",
                         {"GPU Shortage Easing", "Battery Tech Leap"}),
                 "newsflash/Section");
  gen.add_screen("nf_tech2",
                 section("Tech", "nf:id/tech_header",
                         {"Chip Wars", "Fab Expansion Plans"}),
                 "newsflash/Section");
  gen.add_screen("nf_saved",
                 section("Saved stories", "nf:id/saved_header",
                         {"Election Roundup"}),
                 "newsflash/Saved");

  auto article = [&](const std::string& title, const std::string& body,
                     bool bookmarked) {
    std::vector<UINode> kids = {
        label(title, {40, 40, 900, 140}, "nf:id/article_title"),
        icon("Bookmark", "nf:id/bookmark", {940, 40, 1060, 140}),
        list("nf:id/article_body", {0, 300, kW, 1800},
             {label(body, {40, 320, 1040, 560})})};
    if (bookmarked)
      kids.push_back(label("Saved to bookmarks", {40, 1800, 1040, 1880},
                           "nf:id/toast"));
    return frame({0, 0, kW, kH}, std::move(kids));
  };
  gen.add_screen("nf_article_election",
                 article("Election Roundup",
                         "Turnout rose in every district as counting "
                         "continued into the night.",
                         false),
                 "newsflash/Article");
  gen.add_screen("nf_article_election_saved",
                 article("Election Roundup",
                         "Turnout rose in every district as counting "
                         "continued into the night.",
                         true),
                 "newsflash/Article");
  gen.add_screen("nf_article_climate",
                 article("Climate Summit Recap",
                         "Delegates agreed on a draft text after a long "
                         "final session.",
                         false),
                 "newsflash/Article");
  gen.add_screen("nf_article_chip",
                 article("Chip Wars",
                         "Foundries race to add capacity as orders pile up.",
                         false),
                 "newsflash/Article");

  gen.add_screen(
      "nf_tech_peek",
      frame({0, 0, kW, kH},
            {label("Preview: Chip Wars", {140, 600, 940, 700}, "nf:id/peek"),
             label("Foundries race to add capacity.", {140, 720, 940, 800}),
             button("Open story", "nf:id/peek_open", {140, 900, 940, 1000})}),
      "newsflash/Peek");

  auto search = [&](const std::string& query) {
    return frame(
        {0, 0, kW, kH},
        {label("Search", {40, 40, 400, 120}, "nf:id/search_header"),
         field("nf:id/query", "Search stories", query, {40, 180, 1040, 300}),
         label("Recent: elections, housing", {40, 340, 1040, 420})});
  };
  gen.add_screen("nf_search", search(""), "newsflash/Search");
  gen.add_screen("nf_search_typed", search("climate"), "newsflash/Search");
  gen.add_screen("nf_search_results",
                 section("Results", "nf:id/results_header",
                         {"Climate Summit Recap", "Heatwave Q&A"}),
                 "newsflash/SearchResults");

  gen.add_task(
      "news_bookmark_election", "newsflash", "user",
      "Bookmark the Election Roundup article from the Politics section.",
      {{"nf_home", "swipe [5] [up]"},
       {"nf_home2", "click [2]"},
       {"nf_politics", "swipe [0] [up]"},
       {"nf_politics2", "click [1]"},
       {"nf_article_election", "click [0]"}},
      "nf_article_election_saved",
      {evaluator("presence",
                 {stop_page({clause("text", "exact", "Saved to bookmarks")})}),
       evaluator(
           "sequential",
           {find_action(click_on({clause("text", "exact", "Politics")})),
            find_action(click_on(
                {clause("text", "exact", "Election Roundup")})),
            find_action(click_on(
                {clause("content_desc", "exact", "Bookmark")}))}),
       evaluator("presence", {find_element({clause("text", "exact",
                                                   "Election Roundup")})})});

  gen.add_task(
      "news_search_climate", "newsflash", "user",
      "Search NewsFlash for climate coverage and open the top result.",
      {{"nf_home", "click [0]"},
       {"nf_search", "text [0] [climate]"},
       {"nf_search_typed", "press [enter]"},
       {"nf_search_results", "click [1]"}},
      "nf_article_climate",
      {evaluator("presence",
                 {last_action(click_on(
                     {clause("text", "contains", "Climate Summit")}))}),
       evaluator("presence",
                 {stop_page({clause("resource_id", "contains",
                                    "article_title"),
                             clause("text", "contains", "Climate Summit")})}),
       evaluator("consecutive", {find_action(typed("exact", "climate")),
                                 find_action(pressed("enter"))})});

  gen.add_task(
      "news_open_chip_wars", "newsflash", "testing",
      "Verify that the Tech section's Chip Wars story opens from its "
      "long-press preview flow.",
      {{"nf_home", "click [3]"},
       {"nf_tech", "swipe [0] [up]"},
       {"nf_tech2", "longclick [1]"},
       {"nf_tech_peek", "press [back]"},
       {"nf_tech2", "click [1]"}},
      "nf_article_chip",
      {evaluator("presence",
                 {stop_page({clause("resource_id", "contains",
                                    "article_title"),
                             clause("text", "exact", "Chip Wars")})}),
       evaluator("presence",
                 {find_element_by_action({clause("text", "exact",
                                                 "Chip Wars")},
                                         json{{"verb", "longclick"}})})});

  gen.add_task(
      "news_saved_after_bookmark", "newsflash", "testing",
      "Verify that bookmarking the Election Roundup makes it appear under "
      "the Saved tab.",
      {{"nf_home", "click [2]"},
       {"nf_politics", "click [1]"},
       {"nf_article_election", "click [0]"},
       {"nf_article_election_saved", "press [back]"},
       {"nf_politics", "press [back]"},
       {"nf_home", "click [4]"}},
      "nf_saved",
      {evaluator("presence",
                 {stop_page({clause("resource_id", "contains",
                                    "saved_header")})}),
       evaluator(
           "sequential",
           {find_action(click_on({clause("text", "exact", "Politics")})),
            find_action(click_on(
                {clause("content_desc", "exact", "Bookmark")})),
            find_action(click_on({clause("text", "exact", "Saved")}))}),
       evaluator("presence", {find_element({clause("text", "exact",
                                                   "Election Roundup")})})});
}

// ---- app: notelite ---------------------------------------------------------

void build_notelite(Generator& gen) {
  auto home = [&](std::vector<std::string> notes) {
    std::vector<UINode> rows;
    int y = 340;
    for (size_t i = 0; i < notes.size(); ++i) {
      rows.push_back(row(notes[i], "nl:id/note_item_" + std::to_string(i),
                         {40, y, 1040, y + 140}, /*long_clickable=*/true));
      y += 180;
    }
    if (rows.empty())
      rows.push_back(label("No notes yet", {40, 340, 1040, 460}));
    return frame(
        {0, 0, kW, kH},
        {group({0, 0, kW, 160},
               {label("NoteLite", {40, 40, 360, 120}, "nl:id/title"),
                icon("Settings", "nl:id/settings", {940, 20, 1060, 140})}),
         button("New note", "nl:id/new_note", {40, 180, 1040, 300}),
         list("nl:id/notes", {0, 320, kW, 1800}, std::move(rows))});
  };
  gen.add_screen("nl_home", home({"Team sync"}), "notelite/Home");
  gen.add_screen("nl_saved_groceries", home({"Team sync", "Groceries"}),
                 "notelite/Home");
  gen.add_screen("nl_saved_packing", home({"Team sync", "Packing list"}),
                 "notelite/Home");

  auto editor = [&](const std::string& title, const std::string& body) {
    return frame(
        {0, 0, kW, kH},
        {label("New note", {40, 40, 400, 120}, "nl:id/editor_header"),
         field("nl:id/title_input", "Note title", title, {40, 180, 1040, 300}),
         field("nl:id/body_input", "Note body", body, {40, 340, 1040, 1500}),
         button("Save", "nl:id/save", {40, 1650, 1040, 1780})});
  };
  gen.add_screen("nl_editor", editor("", ""), "notelite/Editor");
  gen.add_screen("nl_editor_groceries_t", editor("Groceries", ""),
                 "notelite/Editor");
  gen.add_screen("nl_editor_groceries",
                 editor("Groceries", "milk and eggs"), "notelite/Editor");
  gen.add_screen("nl_editor_packing_t", editor("Packing list", ""),
                 "notelite/Editor");
  gen.add_screen("nl_editor_packing",
                 editor("Packing list", "socks, charger, passport"),
                 "notelite/Editor");

  auto settings = [&](std::vector<std::string> options, bool dark_banner) {
    std::vector<UINode> kids = {
        label("Settings", {40, 40, 400, 120}, "nl:id/settings_header")};
    if (dark_banner)
      kids.push_back(label("Dark mode is on", {40, 140, 1040, 220},
                           "nl:id/banner"));
    std::vector<UINode> rows;
    int y = 300;
    for (size_t i = 0; i < options.size(); ++i) {
      rows.push_back(row(options[i], "nl:id/option_" + std::to_string(i),
                         {40, y, 1040, y + 140}));
      y += 180;
    }
    kids.push_back(list("nl:id/options", {0, 260, kW, 1800}, std::move(rows)));
    return frame({0, 0, kW, kH}, std::move(kids));
  };
  gen.add_screen("nl_settings", settings({"Notifications", "Sync"}, false),
                 "notelite/Settings");
  gen.add_screen("nl_settings2", settings({"Dark mode", "Font size"}, false),
                 "notelite/Settings");
  gen.add_screen("nl_settings_dark",
                 settings({"Dark mode", "Font size"}, true),
                 "notelite/Settings");

  auto note_view = [&](const std::string& title, const std::string& body) {
    return frame(
        {0, 0, kW, kH},
        {label(title, {40, 40, 900, 140}, "nl:id/note_title"),
         list("nl:id/scroll", {0, 300, kW, 1600},
              {label(body, {40, 320, 1040, 560}, "nl:id/note_body")}),
         button("Edit", "nl:id/edit", {40, 1650, 1040, 1780})});
  };
  gen.add_screen("nl_note_team",
                 note_view("Team sync", "agenda: quarterly goals and hiring"),
                 "notelite/Note");
  gen.add_screen("nl_note_team2",
                 note_view("Team sync", "next steps: book summit room"),
                 "notelite/Note");
  gen.add_screen(
      "nl_note_packing",
      note_view("Packing list", "socks, charger, passport"),
      "notelite/Note");

  gen.add_screen(
      "nl_note_menu",
      frame({0, 0, kW, kH},
            {label("Share note?", {140, 600, 940, 700}, "nl:id/menu_title"),
             button("Share", "nl:id/share", {140, 760, 520, 880}),
             button("Delete", "nl:id/delete", {560, 760, 940, 880})}),
      "notelite/Menu");
  gen.add_screen(
      "nl_share_sheet",
      frame({0, 0, kW, kH},
            {label("Share via...", {40, 40, 600, 140}, "nl:id/share_header"),
             row("Mail", "nl:id/share_mail", {40, 200, 1040, 340}),
             row("Chat", "nl:id/share_chat", {40, 380, 1040, 520})}),
      "notelite/Share");

  gen.add_task(
      "note_create_groceries", "notelite", "testing",
      "Verify that saving a note titled 'Groceries' with body 'milk and "
      "eggs' adds it to the notes list.",
      {{"nl_home", "click [1]"},
       {"nl_editor", "text [0] [Groceries]"},
       {"nl_editor_groceries_t", "text [1] [milk and eggs]"},
       {"nl_editor_groceries", "press [wait]"},
       {"nl_editor_groceries", "click [2]"}},
      "nl_saved_groceries",
      {evaluator("sequential",
                 {find_action(typed("exact", "Groceries")),
                  find_action(typed("contains", "milk")),
                  find_action(click_on({clause("text", "exact", "Save")}))}),
       evaluator("presence",
                 {stop_page({clause("text", "exact", "Groceries"),
                             clause("resource_id", "contains",
                                    "note_item")})}),
       evaluator("presence",
                 {last_action(click_on({clause("text", "exact", "Save")}))}),
       evaluator("consecutive",
                 {find_action(typed("exact", "Groceries")),
                  find_action(typed("contains", "milk"))})});

  gen.add_task(
      "note_enable_dark_mode", "notelite", "user",
      "Turn on dark mode in the NoteLite settings.",
      {{"nl_home", "click [0]"},
       {"nl_settings", "swipe [0] [up]"},
       {"nl_settings2", "click [1]"}},
      "nl_settings_dark",
      {evaluator("presence",
                 {stop_page({clause("text", "exact", "Dark mode is on")})}),
       evaluator("presence",
                 {find_element_by_action(
                     {clause("content_desc", "exact", "Settings")},
                     json{{"verb", "click"}})})});

  gen.add_task(
      "note_share_team_sync", "notelite", "testing",
      "Verify the Team sync note can be shared from its long-press menu.",
      {{"nl_home", "click [3]"},
       {"nl_note_team", "swipe [0] [up]"},
       {"nl_note_team2", "press [back]"},
       {"nl_home", "longclick [3]"},
       {"nl_note_menu", "click [0]"}},
      "nl_share_sheet",
      {evaluator("presence",
                 {stop_page({clause("text", "contains", "Share via")})}),
       evaluator(
           "consecutive",
           {find_action(longclick_on({clause("text", "exact", "Team sync")})),
            find_action(click_on({clause("text", "exact", "Share")}))}),
       evaluator("presence",
                 {find_element_by_action({clause("text", "exact",
                                                 "Team sync")},
                                         json{{"verb", "click"}})})});

  gen.add_task(
      "note_draft_packing_list", "notelite", "user",
      "Draft a note titled 'Packing list' with the packing items as body, "
      "save it, and reopen it from the list.",
      {{"nl_home", "click [1]"},
       {"nl_editor", "text [0] [Packing list]"},
       {"nl_editor_packing_t", "text [1] [socks, charger, passport]"},
       {"nl_editor_packing", "click [2]"},
       {"nl_saved_packing", "click [4]"}},
      "nl_note_packing",
      {evaluator("presence",
                 {stop_page({clause("resource_id", "contains", "note_body"),
                             clause("text", "contains", "passport")})}),
       evaluator(
           "sequential",
           {find_action(typed("contains", "Packing")),
            find_action(click_on({clause("text", "exact", "Save")})),
            find_action(click_on({clause("text", "exact",
                                         "Packing list")}))}),
       evaluator("consecutive",
                 {find_action(typed("contains", "Packing")),
                  find_action(typed("contains", "passport"))})});
}

// ---- probes ---------------------------------------------------------------

void write_knowledge(Generator& gen) {
  json header{{"format_version", 1}, {"kind", "knowledge"}};
  std::vector<json> items;
  auto mcq = [&](const std::string& id, const std::string& dim,
                 const std::string& q, std::vector<std::string> options,
                 const std::string& answer) {
    items.push_back(json{{"id", id},
                         {"dimension", dim},
                         {"kind", "mcq"},
                         {"question", q},
                         {"options", options},
                         {"answer", answer}});
  };
  auto bq = [&](const std::string& id, const std::string& dim,
                const std::string& q, const std::string& answer) {
    items.push_back(json{{"id", id},
                         {"dimension", dim},
                         {"kind", "bq"},
                         {"question", q},
                         {"answer", answer}});
  };

  mcq("k_goal_01", "goal_understanding",
      "The goal is 'Search ShopLite for a blue mug and order it'. What "
      "should the agent do first on the home screen?",
      {"Open the cart", "Type into the search field", "Press back",
       "Open the settings"},
      "B");
  mcq("k_goal_02", "goal_understanding",
      "The goal is 'Turn on dark mode in the NoteLite settings'. Which "
      "screen must the agent reach?",
      {"The note editor", "The share sheet", "The settings screen"},
      "C");
  mcq("k_goal_03", "goal_understanding",
      "The goal is 'Bookmark the Election Roundup article'. What confirms "
      "completion?",
      {"The article shows a saved banner", "The app returns home",
       "The search field is cleared", "A new note is created"},
      "A");
  mcq("k_goal_04", "goal_understanding",
      "The goal says 'order it to 12 Main St'. Where does '12 Main St' "
      "belong?",
      {"The search field", "The delivery address field", "The note body"},
      "B");
  bq("k_goal_05", "goal_understanding",
     "Goal: 'Verify the Team sync note can be shared'. Is long-pressing the "
     "note a reasonable step?",
     "Yes");
  bq("k_goal_06", "goal_understanding",
     "Goal: 'Search NewsFlash for climate coverage'. Should the agent stop "
     "before opening any result if the goal also says to open the top "
     "result?",
     "No");
  bq("k_goal_07", "goal_understanding",
     "Goal: 'Add the travel mug to the cart'. Does the goal require placing "
     "an order?",
     "No");
  bq("k_goal_08", "goal_understanding",
     "Goal: 'Draft a note titled Packing list and save it'. Is pressing "
     "Save required?",
     "Yes");

  mcq("k_app_01", "app_knowledge",
      "In NewsFlash, which tab lists bookmarked stories?",
      {"Top", "Politics", "Saved", "Tech"}, "C");
  mcq("k_app_02", "app_knowledge",
      "In ShopLite, what appears immediately after tapping 'Place order'?",
      {"The search results", "An 'Order confirmed' receipt",
       "The product page"},
      "B");
  mcq("k_app_03", "app_knowledge",
      "In NoteLite, which control creates a note?",
      {"The 'New note' button", "The Settings icon", "The Edit button",
       "The share sheet"},
      "A");
  mcq("k_app_04", "app_knowledge",
      "In ShopLite, where is the Checkout button?",
      {"On the home screen", "On the cart screen", "On the receipt"}, "B");
  bq("k_app_05", "app_knowledge",
     "In NewsFlash, does pressing Enter in the search field submit the "
     "query?",
     "Yes");
  bq("k_app_06", "app_knowledge",
     "In NoteLite, does deleting a note happen from the settings screen?",
     "No");
  bq("k_app_07", "app_knowledge",
     "In ShopLite, can a product be added to the cart from its product "
     "page?",
     "Yes");
  bq("k_app_08", "app_knowledge",
     "In NewsFlash, is the Bookmark control part of the article screen?",
     "Yes");

  std::string out = header.dump() + "\n";
  for (const json& item : items) out += item.dump() + "\n";
  write_text_file(gen.suite / "probes/knowledge.jsonl", out);
}

void write_completion(Generator& gen) {
  std::string out =
      json{{"format_version", 1}, {"kind", "completion"}}.dump() + "\n";
  for (const std::string& task_id : gen.task_order) {
    const auto& actions = gen.references.at(task_id);
    std::vector<std::string> history;
    for (size_t i = 0; i <= actions.size(); ++i) {
      std::string screen_name =
          i < actions.size() ? actions[i].first : gen.final_screens.at(task_id);
      json item;
      item["id"] = task_id + "_step" + std::to_string(i);
      item["task_id"] = task_id;
      item["screen"] = Generator::screen_ref(screen_name);
      item["history"] = history;
      item["label"] = i == actions.size() ? "stop" : "continue";
      out += item.dump() + "\n";
      if (i < actions.size()) history.push_back(actions[i].second);
    }
  }
  write_text_file(gen.suite / "probes/completion.jsonl", out);
}

void write_grounding(Generator& gen) {
  auto bbox_of = [&](const std::string& screen, const std::string& id) {
    Rect found{};
    bool ok = false;
    visit_preorder(gen.get(screen).root, [&](const UINode& n, int) {
      if (!ok && n.resource_id == id) {
        found = n.bounds;
        ok = true;
      }
    });
    if (!ok) throw HarnessError("grounding target not found: " + id);
    return found;
  };
  std::string out =
      json{{"format_version", 1}, {"kind", "grounding"}}.dump() + "\n";
  int counter = 0;
  auto item = [&](const std::string& instruction, const std::string& screen,
                  const std::string& id, const std::string& verb) {
    Rect b = bbox_of(screen, id);
    json v;
    v["id"] = "g_" + std::to_string(++counter);
    v["instruction"] = instruction;
    v["screen"] = Generator::screen_ref(screen);
    v["screenshot"] = "screenshots/" + screen + ".png";
    v["bbox"] = {b.left, b.top, b.right, b.bottom};
    v["verb"] = verb;
    out += v.dump() + "\n";
  };
  item("click the search button", "shoplite_home", "shoplite:id/search_btn",
       "click");
  item("type the delivery address", "shoplite_checkout_blue",
       "shoplite:id/address", "text");
  item("open the cart", "shoplite_home", "shoplite:id/cart", "click");
  item("scroll the search results", "shoplite_results_blue",
       "shoplite:id/results", "swipe");
  item("open the Politics tab", "nf_home", "nf:id/tab_politics", "click");
  item("long press the Chip Wars story", "nf_tech2", "nf:id/story_0",
       "longclick");
  item("bookmark the article", "nf_article_election", "nf:id/bookmark",
       "click");
  item("create a new note", "nl_home", "nl:id/new_note", "click");
  item("type the note title", "nl_editor", "nl:id/title_input", "text");
  item("turn on dark mode", "nl_settings2", "nl:id/option_0", "click");
  write_text_file(gen.suite / "probes/grounding.jsonl", out);
}

void write_focused(Generator& gen) {
  std::string out =
      json{{"format_version", 1}, {"kind", "focused"}}.dump() + "\n";
  int counter = 0;
  auto item = [&](const std::string& instruction,
                  const std::string& pattern) {
    json v;
    v["id"] = "f_" + std::to_string(++counter);
    v["instruction"] = instruction;
    v["pattern"] = pattern;
    out += v.dump() + "\n";
  };
  item("Respond with `input [123] [some text]`.",
       "input \\[123\\] \\[some text\\]");
  item("Reply with a line of the form `click [7]`, where 7 may be any "
       "nonnegative integer.",
       "click \\[\\d+\\]");
  item("Respond with `press [back]` and nothing else.", "press \\[back\\]");
  item("Reply in the form `swipe [2] [up]`; the index may vary but the "
       "direction must be up.",
       "swipe \\[\\d+\\] \\[up\\]");
  item("Answer with exactly one uppercase option letter, e.g. `B`.",
       "[A-F]");
  item("Reply with the single word `continue`.", "continue");
  item("Respond with `text [5] [hello world]`.",
       "text \\[5\\] \\[hello world\\]");
  item("Reply with coordinates in the form `longclick [640,360]`; any "
       "coordinates are acceptable.",
       "longclick \\[\\d+,\\d+\\]");
  write_text_file(gen.suite / "probes/focused.jsonl", out);
}

// ---- oracle responses and cache --------------------------------------------

std::vector<std::string> oracle_responses(const Generator& gen,
                                          const std::string& task_id) {
  std::vector<std::string> responses;
  const auto& actions = gen.references.at(task_id);
  for (size_t i = 0; i < actions.size(); ++i)
    responses.push_back("Thought: step " + std::to_string(i + 1) +
                        " of the plan.\n" + actions[i].second);
  responses.push_back("Thought: the goal is accomplished.\npress [stop]");
  return responses;
}

void write_backends(const Generator& gen) {
  json cached;
  cached["format_version"] = 1;
  cached["kind"] = "cached";
  cached["model"] = "fixture-oracle";
  cached["store"] = "../cache";
  write_text_file(gen.out / "backends/cached.json", cached.dump(2) + "\n");

  json scripted;
  scripted["format_version"] = 1;
  scripted["kind"] = "scripted";
  scripted["model"] = "fixture-oracle";
  json by_task = json::object();
  for (const std::string& task_id : gen.task_order)
    by_task[task_id] = oracle_responses(gen, task_id);
  scripted["responses_by_task"] = std::move(by_task);
  write_text_file(gen.out / "backends/scripted-oracle.json",
                  scripted.dump(2) + "\n");
}

void record_cache(const Generator& gen, const Suite& suite) {
  std::filesystem::path store = gen.out / "cache";
  std::filesystem::create_directories(store);
  EpisodeConfig config;
  config.mode = ObservationMode::a11y_full;
  config.max_steps = 30;
  config.policy = NoTransitionPolicy::stay;
  config.model = "fixture-oracle";
  for (const Task& task : suite.tasks) {
    auto utg = suite.utg_for(task.app_id);
    ReplayEnv env(*utg, *suite.screens, config.policy);
    auto scripted = std::make_shared<ScriptedBackend>(
        oracle_responses(gen, task.id));
    CachedBackend recorder(store, scripted);
    EpisodeResult result = run_episode(task, env, recorder, config);
    if (result.trajectory.stop_reason != StopReason::agent_stop)
      throw HarnessError("cache recording for " + task.id +
                         " did not stop cleanly");
  }
}

// ---- the standalone login fixture ------------------------------------------

void write_login_fixture(const Generator& gen) {
  UIScreen screen;
  screen.width = kW;
  screen.height = kH;
  screen.activity_tag = "shoplite/Login";
  screen.screenshot_ref = "login.png";
  screen.root = frame(
      {0, 0, kW, kH},
      {field("com.fake.shoplite:id/username", "Username", "",
             {40, 300, 1040, 420}),
       button("Log in", "com.fake.shoplite:id/login", {40, 500, 1040, 620})});
  write_text_file(gen.out / "screens/login.json", save_screen(screen));
  write_binary_file(gen.out / "screens/login.png",
                    encode_png(render_screenshot(screen)));
}

void write_manifest(Generator& gen) {
  json manifest;
  manifest["format_version"] = 1;
  manifest["name"] = "synthetic-nav-suite";
  manifest["version"] = "1.0.0";
  manifest["apps"] = {"shoplite", "newsflash", "notelite"};
  manifest["tasks"] = gen.manifest_tasks;
  manifest["utg"] = {{"shoplite", "utg/shoplite.json"},
                     {"newsflash", "utg/newsflash.json"},
                     {"notelite", "utg/notelite.json"}};
  manifest["probes"] = {{"knowledge", "probes/knowledge.jsonl"},
                        {"completion", "probes/completion.jsonl"},
                        {"grounding", "probes/grounding.jsonl"},
                        {"focused", "probes/focused.jsonl"}};
  write_text_file(gen.suite / "manifest.json", manifest.dump(2) + "\n");
}

void write_utgs(const Generator& gen) {
  std::map<std::string,
           std::vector<std::pair<std::string, const Trajectory*>>>
      recordings;
  std::map<std::string, Trajectory> keep;
  for (const std::string& task_id : gen.task_order)
    keep.emplace(task_id, gen.make_reference(task_id));
  for (const std::string& task_id : gen.task_order)
    recordings[gen.task_apps.at(task_id)].push_back(
        {"trajectories/" + task_id + ".jsonl", &keep.at(task_id)});
  for (const auto& [app_id, list] : recordings) {
    Utg utg = build_utg(app_id, list);
    save_utg(utg, gen.suite / ("utg/" + app_id + ".json"));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the bundled synthetic fixtures"};
  std::string out = "fixtures";
  app.add_option("--out", out, "fixtures output directory");
  CLI11_PARSE(app, argc, argv);

  try {
    Generator gen;
    gen.out = out;
    gen.suite = gen.out / "suite";

    build_shoplite(gen);
    build_newsflash(gen);
    build_notelite(gen);

    gen.write_screens();
    write_utgs(gen);
    write_manifest(gen);
    write_knowledge(gen);
    write_completion(gen);
    write_grounding(gen);
    write_focused(gen);
    write_backends(gen);
    write_login_fixture(gen);

    // Self-check: the generated suite must load cleanly and pass its lints
    // before the cache is recorded against it.
    Suite suite = load_suite(gen.suite);
    std::vector<std::string> problems = lint_suite(suite);
    for (const std::string& problem : problems)
      std::cerr << "lint: " << problem << "\n";
    if (!problems.empty()) return 1;

    record_cache(gen, suite);

    double mean = 0;
    for (const std::string& task_id : gen.task_order)
      mean += static_cast<double>(gen.references.at(task_id).size());
    mean /= static_cast<double>(gen.task_order.size());
    std::cout << "wrote " << gen.task_order.size() << " tasks over "
              << suite.utgs.size() << " apps, mean reference length " << mean
              << " actions, " << gen.screens.size() << " screens\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "fixture generation failed: " << e.what() << "\n";
    return 1;
  }
}
