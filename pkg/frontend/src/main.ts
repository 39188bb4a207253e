import { ApiClient } from "./api.js";
import { SessionStore } from "./state.js";
import { renderQueryBar, renderResults, renderSourceViewer, type Handlers } from "./ui.js";

export function mountApp(root: HTMLElement, api: ApiClient = new ApiClient()): SessionStore {
  root.innerHTML = "";
  const queryBar = document.createElement("div");
  queryBar.id = "query-bar";
  const results = document.createElement("div");
  results.id = "results";
  const viewer = document.createElement("div");
  viewer.id = "viewer";
  root.append(queryBar, results, viewer);

  const store = new SessionStore();

  const handlers: Handlers = {
    submitQuery(query: string) {
      const generation = store.beginQuery(query);
      api
        .query(query)
        .then((result) => store.applyStageOne(generation, result))
        .catch((error: Error) => store.failQuery(generation, error.message || "query failed"));
    },
    generateResponse(chunkId: string) {
      if (!store.beginRespond(chunkId)) return; // request already in flight
      const generation = store.current.generation;
      api
        .respond(chunkId, store.current.currentQuery)
        .then((response) => store.applyRespond(generation, response))
        .catch(() => store.failRespond(generation, chunkId));
    },
    openSource(chunkId: string) {
      const generation = store.current.generation;
      api
        .source(chunkId)
        .then((bundle) => store.openSource(generation, bundle))
        .catch(() => store.closeSource());
    },
    closeSource() {
      store.closeSource();
    },
    sendFeedback(chunkId, stage, rating) {
      api
        .feedback(store.current.currentQuery, chunkId, stage, rating)
        .then(() => store.markFeedback(stage, chunkId))
        .catch(() => {
          /* control stays unlatched so the user can retry */
        });
    },
  };

  store.subscribe((state) => {
    renderResults(results, state, handlers);
    renderSourceViewer(viewer, state, handlers);
  });

  document.addEventListener("keydown", (event) => {
    if (event.key === "Escape" && store.current.sourceViewer) store.closeSource();
  });

  renderQueryBar(queryBar, [], handlers);
  api
    .suggestions()
    .then((suggestions) => {
      store.setSuggestions(suggestions);
      renderQueryBar(queryBar, suggestions, handlers);
    })
    .catch(() => {
      /* degraded: bar renders without suggestions */
    });

  return store;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mountApp(document.getElementById("app") as HTMLElement);
}
