"""Deterministic generator for the benchmark corpus.

Produces 60 synthetic German privacy policies with 16635 paragraphs in
total and per-right positive counts of 83 / 87 / 77 / 95 / 80
(information, deletion, portability, withdraw consent, complaint). Every
document states each of the five rights at least once; the remaining
positives are spread as second occurrences across documents.

A positive paragraph embeds one right-granting sentence, composed from a
granting frame and a per-document core phrase, between document-specific
filler sentences. Core phrases are assembled compositionally (signature
term x object x verb), so each document states a right in its own words;
only the signature vocabulary recurs across documents. Negatives cover the
usual policy topics and include a large share of GDPR-adjacent hard
negatives: paragraphs that reuse the signature vocabulary without a
granting frame (retention periods, consent handling, complaint handling)
and paragraphs that reuse granting frames ("Sie haben das Recht, ...")
for adjacent but unlabeled rights (objection, restriction, account
management). Neither ingredient alone marks a paragraph as positive.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .anchors import (
    RIGHT_COMPLAINT,
    RIGHT_DATA_PORTABILITY,
    RIGHT_DELETION,
    RIGHT_INFORMATION,
    RIGHT_NAMES,
    RIGHT_WITHDRAW_CONSENT,
    RIGHTS,
    GDPR_REFERENCES,
)

N_DOCUMENTS = 60
TOTAL_BLOBS = 16635
POSITIVE_COUNTS = {
    RIGHT_INFORMATION: 83,
    RIGHT_DELETION: 87,
    RIGHT_DATA_PORTABILITY: 77,
    RIGHT_WITHDRAW_CONSENT: 95,
    RIGHT_COMPLAINT: 80,
}

_COMPANY_HEADS = [
    "Nordwind", "Datenhaus", "Medialux", "Finexa", "Cloudara", "Softura",
    "Webkontor", "Handelshof", "Technikum", "Primadata", "Silberberg",
    "Kornfeld", "Lichtwerk", "Blaustein", "Eisenhut", "Gruenfeld",
    "Seeblick", "Sternweg", "Hafenfeld", "Waldhaus",
]
_COMPANY_TAILS = ["GmbH", "AG", "SE", "UG", "KG", "GmbH & Co. KG"]
_CITIES = [
    "Berlin", "Hamburg", "Muenchen", "Koeln", "Frankfurt", "Stuttgart",
    "Leipzig", "Dresden", "Bremen", "Hannover", "Nuernberg", "Mainz",
]
_TOOLS = [
    "Matomo", "Google Analytics", "Hotjar", "HubSpot", "Mailchimp",
    "CleverReach", "Friendly Captcha", "Cloudflare", "Sentry", "Plausible",
]
_PROVIDERS = [
    "Hetzner Online", "IONOS", "Strato", "Amazon Web Services",
    "Microsoft Azure", "OVHcloud", "netcup",
]
_DAYS = ["7", "14", "30", "60", "90", "180"]

# (pool, sampling weight); hard negatives carry higher weight so right-like
# vocabulary is common outside true right statements
_FILLER_TOPICS: dict[str, tuple[list[str], float]] = {
    "cookies": ([
        "Unsere Website verwendet Cookies, um die Nutzung bestimmter Funktionen zu ermoeglichen.",
        "Sitzungscookies werden nach dem Ende Ihres Besuchs automatisch entfernt.",
        "In den Einstellungen Ihres Browsers koennen Sie das Speichern von Cookies deaktivieren.",
        "Beim Aufruf unserer Seiten setzt {tool} technisch notwendige Cookies ein.",
        "Dauerhafte Cookies bleiben fuer {days} Tage auf Ihrem Endgeraet gespeichert.",
    ], 1.0),
    "analytics": ([
        "Zur Reichweitenmessung setzen wir den Dienst {tool} ein.",
        "Die durch {tool} erzeugten Statistiken werden ausschliesslich in aggregierter Form ausgewertet.",
        "IP-Adressen werden vor der Auswertung durch {tool} gekuerzt.",
        "Die Analyse des Nutzerverhaltens erfolgt pseudonymisiert.",
        "{tool} verarbeitet Zugriffsdaten in unserem Auftrag.",
    ], 1.0),
    "hosting": ([
        "Unsere Systeme werden in einem Rechenzentrum von {provider} betrieben.",
        "Mit {provider} wurde ein Vertrag ueber Auftragsverarbeitung geschlossen.",
        "Der Serverstandort befindet sich in {city}.",
        "{provider} stellt die technische Infrastruktur fuer den Betrieb dieser Website bereit.",
        "Wartungsarbeiten an den Servern fuehrt {provider} regelmaessig durch.",
    ], 1.0),
    "logs": ([
        "Beim Besuch der Website werden Server-Logfiles mit Browsertyp und Uhrzeit erfasst.",
        "Die Logdaten dienen der Sicherstellung eines stoerungsfreien Betriebs.",
        "Logfiles werden nach {days} Tagen automatisch ueberschrieben.",
        "Eine Zusammenfuehrung der Logdaten mit anderen Datenquellen findet nicht statt.",
    ], 1.0),
    "newsletter": ([
        "Fuer den Versand unseres Newsletters nutzen wir {tool}.",
        "Die Anmeldung zum Newsletter erfolgt im Double-Opt-in-Verfahren.",
        "Der Newsletter informiert ueber Angebote der {company}.",
        "Die Abmeldung vom Newsletter ist ueber den Link am Ende jeder E-Mail moeglich.",
    ], 1.0),
    "contact": ([
        "Verantwortlich fuer die Datenverarbeitung ist die {company} mit Sitz in {city}.",
        "Unseren Datenschutzbeauftragten erreichen Sie unter {email}.",
        "Bei Fragen zum Datenschutz wenden Sie sich bitte an {email}.",
        "Die {company} ist Ihr Ansprechpartner fuer alle Anliegen rund um diese Website.",
        "Postalische Anfragen richten Sie bitte an unsere Niederlassung in {city}.",
    ], 1.0),
    "security": ([
        "Diese Website nutzt eine TLS-Verschluesselung fuer die Uebertragung vertraulicher Inhalte.",
        "Wir treffen technische und organisatorische Massnahmen zum Schutz Ihrer Daten.",
        "Unsere Sicherheitsmassnahmen werden fortlaufend dem Stand der Technik angepasst.",
        "Der Zugriff auf interne Systeme der {company} ist durch Berechtigungskonzepte beschraenkt.",
    ], 1.0),
    "payment": ([
        "Bei Bestellungen verarbeiten wir die fuer die Vertragsabwicklung erforderlichen Zahlungsdaten.",
        "Zahlungsdaten werden verschluesselt an den jeweiligen Zahlungsdienstleister uebermittelt.",
        "Eine Weitergabe von Bestelldaten erfolgt nur an die mit der Lieferung betrauten Unternehmen.",
        "Die Abwicklung von Zahlungen uebernimmt ein externer Dienstleister.",
    ], 1.0),
    "social": ([
        "Auf unseren Seiten sind keine Social-Media-Plugins eingebunden, die Daten automatisch uebertragen.",
        "Verlinkungen zu sozialen Netzwerken sind als reine Hyperlinks umgesetzt.",
        "Beim Anklicken eines Links zu einem sozialen Netzwerk gelten dessen Datenschutzhinweise.",
        "Inhalte von Videoplattformen werden erst nach Ihrer aktiven Zustimmung geladen.",
    ], 1.0),
    "changes": ([
        "Wir behalten uns vor, diese Datenschutzerklaerung bei Bedarf anzupassen.",
        "Es gilt die jeweils auf dieser Seite veroeffentlichte Fassung der Datenschutzerklaerung.",
        "Diese Erklaerung wurde zuletzt im Jahr 2023 ueberarbeitet.",
    ], 0.7),
    # hard negatives: right-adjacent vocabulary without a granting frame
    "retention": ([
        "Wir speichern personenbezogene Daten nur so lange, wie dies fuer den jeweiligen Zweck erforderlich ist.",
        "Nach Ablauf der gesetzlichen Aufbewahrungsfristen werden die Daten routinemaessig geloescht.",
        "Handels- und steuerrechtliche Pflichten koennen einer sofortigen Loeschung entgegenstehen.",
        "Die Loeschung erfolgt, sobald der Zweck der Speicherung entfaellt.",
        "Bewerbungsunterlagen werden {days} Tage nach Abschluss des Verfahrens vernichtet.",
        "Die Loeschung von Logdaten erfolgt automatisiert nach {days} Tagen.",
    ], 1.6),
    "legalbasis": ([
        "Rechtsgrundlage fuer den Versand des Newsletters ist Ihre Einwilligung.",
        "Die erteilte Einwilligung wird zusammen mit dem Zeitpunkt der Anmeldung protokolliert.",
        "Nach einem Widerruf der Einwilligung stellen wir den Versand des Newsletters umgehend ein.",
        "Bis zu einem Widerruf bleibt die auf der Einwilligung beruhende Verarbeitung rechtmaessig.",
        "Ohne Ihre Einwilligung werden keine Cookies zu Marketingzwecken gesetzt.",
        "Eine widerrufene Einwilligung wird in unserem System mit Datum dokumentiert.",
        "Soweit die Verarbeitung zur Vertragserfuellung erforderlich ist, stuetzen wir uns auf gesetzliche Grundlagen.",
    ], 1.6),
    "objection": ([
        "Gegen die Verarbeitung auf Grundlage berechtigter Interessen koennen Sie Widerspruch einlegen.",
        "Im Falle eines Widerspruchs pruefen wir die Verarbeitung im Einzelfall erneut.",
        "Werbewiderspruch ist jederzeit formlos moeglich.",
        "Nach einem Widerspruch verarbeiten wir die betroffenen Daten nicht mehr zu Werbezwecken.",
    ], 1.4),
    "info_admin": ([
        "Diese Datenschutzerklaerung informiert Sie ueber Art, Umfang und Zweck der Verarbeitung personenbezogener Daten.",
        "Weitere Informationen zum Datenschutz erhalten Sie unter {email}.",
        "Fuer die Erteilung einer Auskunft benoetigen wir einen Nachweis Ihrer Identitaet.",
        "Eine telefonische Auskunft zu Vertragsdaten ist aus Sicherheitsgruenden nicht moeglich.",
        "Auskunft zu Werbezwecken erteilen wir grundsaetzlich nicht an Dritte.",
        "Die Kategorien der verarbeiteten Daten sind in den folgenden Abschnitten im Einzelnen beschrieben.",
        "Eine Bestaetigung des Vertragsschlusses erhalten Sie per E-Mail an {email}.",
    ], 1.5),
    "deletion_admin": ([
        "Geloeschte Inhalte werden nach {days} Tagen auch aus unseren Sicherungskopien entfernt.",
        "Nach Vertragsende werden die Daten fuer die Dauer gesetzlicher Fristen gesperrt und anschliessend geloescht.",
        "Die Loeschung einzelner Beitraege koennen Moderatoren im Forum veranlassen.",
        "Eine Berichtigung von Rechnungsdaten ist nach Abschluss des Bestellvorgangs nicht mehr moeglich.",
        "Inaktive Kundenkonten werden nach {days} Tagen automatisch entfernt.",
    ], 1.5),
    "portability_admin": ([
        "Im Kundenkonto steht eine Exportfunktion fuer Ihre Vertragsdaten bereit.",
        "Daten werden intern in gaengigen Formaten wie CSV und JSON gespeichert.",
        "Die Uebertragung von Bestelldaten an {provider} erfolgt in einem maschinenlesbaren Format.",
        "Schnittstellen zu Drittanbietern nutzen strukturierte und maschinenlesbare Datenformate.",
        "Rechnungen stellen wir in einem gaengigen elektronischen Format bereit.",
    ], 1.5),
    "complaint_admin": ([
        "Beschwerden ueber unsere Produkte richten Sie bitte an den Kundenservice.",
        "Im Falle einer Beschwerde dokumentieren wir den Eingang und den Bearbeitungsstand.",
        "Die fuer {city} zustaendige Aufsichtsbehoerde veroeffentlicht jaehrlich einen Taetigkeitsbericht.",
        "Wir arbeiten vertrauensvoll mit der Aufsichtsbehoerde in {city} zusammen.",
        "Eine Beschwerde ueber den Newsletter-Versand koennen Sie formlos an {email} richten.",
    ], 1.5),
}

# long formal sentences sprinkled across all paragraphs; deliberately free
# of the five rights' signature vocabulary so they blur sentence-length and
# register statistics without granting anything
_LONG_FILLERS = [
    "Die auf Ihrem Endgeraet gespeicherten Informationen ermoeglichen es uns, die Funktionsfaehigkeit unserer Website dauerhaft sicherzustellen und unser Angebot fortlaufend zu verbessern.",
    "Die im Rahmen der Reichweitenmessung erhobenen Nutzungsinformationen werden ausschliesslich zur statistischen Auswertung und zur bedarfsgerechten Gestaltung unseres Onlineangebots verarbeitet.",
    "Saemtliche im Rahmen des Hostings anfallenden Verbindungsdaten werden ausschliesslich zur Gewaehrleistung eines dauerhaft stoerungsfreien Betriebs unserer Systeme verarbeitet.",
    "Unsere technischen und organisatorischen Sicherheitsmassnahmen umfassen insbesondere Verschluesselungsverfahren, Zugriffsbeschraenkungen und regelmaessige Ueberpruefungen saemtlicher Verarbeitungssysteme.",
    "Die Aufbewahrung buchhalterischer Unterlagen richtet sich nach den handelsrechtlichen und steuerrechtlichen Aufbewahrungsvorschriften des Handelsgesetzbuchs und der Abgabenordnung.",
    "Die Verarbeitung personenbezogener Daten erfolgt ausschliesslich auf Grundlage der einschlaegigen datenschutzrechtlichen Bestimmungen der Datenschutz-Grundverordnung.",
    "Eine umfassende Zusammenstellung der verarbeiteten Datenkategorien, der Verarbeitungszwecke und der jeweiligen Speicherfristen finden Sie in den nachfolgenden Abschnitten.",
    "Die endgueltige Entfernung saemtlicher personenbezogener Informationen aus unseren Sicherungssystemen erfolgt spaetestens {days} Tage nach Vertragsbeendigung.",
    "Die Bereitstellung der Vertragsunterlagen erfolgt ueber die Exportfunktion des Kundenkontos in allgemein gebraeuchlichen elektronischen Dateiformaten.",
    "Die datenschutzrechtliche Kontrollinstanz unseres Unternehmenssitzes ist fuer saemtliche datenschutzbezogenen Beanstandungen unserer Verarbeitungstaetigkeiten zustaendig.",
    "Die Bereitstellung unseres Onlineangebots erfordert die voruebergehende Speicherung technischer Verbindungsinformationen in automatisierten Protokollierungssystemen.",
    "Vertraglich vereinbarte Dienstleistungen werden ausschliesslich unter Beachtung der vereinbarten Verschwiegenheitsverpflichtungen unserer Mitarbeiterinnen und Mitarbeiter erbracht.",
]


# adjacent rights stated with the very same granting frames as true
# positives; all of them are negatives for the five labels
_ADJACENT_CORES = [
    "der Verarbeitung Ihrer personenbezogenen Daten zu widersprechen",
    "der Verwendung Ihrer Daten fuer Zwecke der Direktwerbung zu widersprechen",
    "die Einschraenkung der Verarbeitung Ihrer personenbezogenen Daten zu verlangen",
    "die Einschraenkung der Verarbeitung zu verlangen, solange eine Pruefung andauert",
    "den Newsletter jederzeit abzubestellen",
    "Ihr Kundenkonto jederzeit zu schliessen",
    "die im Konto hinterlegten Kontaktdaten selbst zu aendern",
    "nicht einer ausschliesslich automatisierten Entscheidung unterworfen zu werden",
    "unsere Website auch ohne Angabe personenbezogener Daten zu nutzen",
    "Ihre Vertragsunterlagen jederzeit im Kundenkonto einzusehen",
]

_HEADINGS = [
    "Datenschutz auf einen Blick",
    "Allgemeine Hinweise und Pflichtinformationen",
    "Datenerfassung auf dieser Website",
    "Analyse-Tools und Werbung",
    "Newsletter",
    "Plugins und Tools",
    "Hosting und Content Delivery",
    "Ihre Rechte als betroffene Person",
]

# right-granting sentence = frame + core phrase (+ optional tail sentence)
_FRAMES = [
    "Sie haben das Recht, {core}.",
    "Ihnen steht das Recht zu, {core}.",
    "Jede betroffene Person hat das Recht, {core}.",
    "Sie sind jederzeit berechtigt, {core}.",
    "Als betroffene Person sind Sie berechtigt, {core}.",
    "Nach der Datenschutz-Grundverordnung haben Sie das Recht, {core}.",
    "Sie haben die Moeglichkeit, {core}.",
    "Es steht Ihnen frei, {core}.",
    "Unsere Nutzerinnen und Nutzer sind berechtigt, {core}.",
    "Ihnen steht es zu, {core}.",
    "Sie sind gesetzlich befugt, {core}.",
    "Die DSGVO raeumt Ihnen die Moeglichkeit ein, {core}.",
    "Das Gesetz gibt Ihnen die Moeglichkeit, {core}.",
    "Betroffene Personen sind befugt, {core}.",
    "Selbstverstaendlich steht es Ihnen zu, {core}.",
    "Als Nutzer dieser Website sind Sie befugt, {core}.",
    "Ihnen wird die Moeglichkeit eingeraeumt, {core}.",
    "Sie verfuegen ueber die Moeglichkeit, {core}.",
]

_TAILS = [
    "",
    "Die Anfrage richten Sie bitte an {email}.",
    "Hierfuer genuegt eine formlose Mitteilung an die {company}.",
    "Dieses Recht koennen Sie jederzeit geltend machen.",
    "Es entstehen Ihnen dabei keine Kosten.",
]

# core phrase = signature x object x verb; the signature slot carries the
# right's legal vocabulary, the other slots vary per document
_CORE_PARTS: dict[str, tuple[list[str], list[str], list[str], str]] = {
    RIGHT_INFORMATION: (
        ["Auskunft ueber", "unentgeltliche Auskunft ueber", "eine Bestaetigung und Auskunft ueber",
         "Auskunft darueber zu erhalten, ob und in welchem Umfang"],
        ["die zu Ihrer Person gespeicherten Daten", "Ihre bei uns verarbeiteten personenbezogenen Daten",
         "die Kategorien der ueber Sie verarbeiteten Daten", "Herkunft und Empfaenger Ihrer Daten",
         "die Zwecke der Verarbeitung Ihrer Daten", "die geplante Speicherdauer Ihrer personenbezogenen Daten",
         "saemtliche zu Ihrem Konto hinterlegten Angaben", "den Umfang der Verarbeitung Ihrer Angaben"],
        ["zu verlangen", "zu erhalten", "zu fordern", "zu erbitten"],
        "{sig} {obj} {verb}",
    ),
    RIGHT_DELETION: (
        ["die Loeschung", "die unverzuegliche Loeschung", "die Berichtigung oder Loeschung",
         "die endgueltige Loeschung"],
        ["Ihrer personenbezogenen Daten", "der zu Ihrer Person gespeicherten Daten",
         "nicht mehr benoetigter Daten", "saemtlicher in Ihrem Profil hinterlegter Angaben",
         "unrichtiger oder veralteter Daten", "Ihrer bei uns verarbeiteten Angaben",
         "der im Rahmen der Registrierung erhobenen Daten", "Ihrer Bestands- und Nutzungsdaten"],
        ["zu verlangen", "zu fordern", "zu beantragen", "geltend zu machen"],
        "{sig} {obj} {verb}",
    ),
    RIGHT_DATA_PORTABILITY: (
        ["in einem maschinenlesbaren Format", "in einem strukturierten, gaengigen und maschinenlesbaren Format",
         "im Wege der Datenuebertragbarkeit", "in einem gaengigen maschinenlesbaren Format"],
        ["die von Ihnen bereitgestellten Daten", "Ihre personenbezogenen Daten",
         "die uns ueberlassenen Daten", "Ihre bei uns gespeicherten Angaben",
         "die zu Ihrem Vertrag gehoerenden Daten", "Ihre Profil- und Nutzungsdaten"],
        ["zu erhalten", "zu verlangen", "ausgehaendigt zu bekommen",
         "an einen anderen Verantwortlichen uebermitteln zu lassen", "herauszuverlangen"],
        "{obj} {sig} {verb}",
    ),
    RIGHT_WITHDRAW_CONSENT: (
        ["zu widerrufen", "formlos zu widerrufen", "mit Wirkung fuer die Zukunft zu widerrufen",
         "jederzeit zu widerrufen"],
        ["eine bereits erteilte Einwilligung", "Ihre Einwilligung in die Verarbeitung",
         "Ihre datenschutzrechtliche Einwilligung", "jede uns gegenueber erklaerte Einwilligung",
         "Ihre Einwilligung zum Erhalt des Newsletters", "die Einwilligung in die Analyse Ihres Nutzungsverhaltens"],
        [""],
        "{obj} {sig}",
    ),
    RIGHT_COMPLAINT: (
        ["Beschwerde", "eine Beschwerde", "jederzeit Beschwerde"],
        ["bei der zustaendigen Aufsichtsbehoerde", "bei einer Datenschutz-Aufsichtsbehoerde",
         "bei der Aufsichtsbehoerde Ihres gewoehnlichen Aufenthaltsorts",
         "bei der Aufsichtsbehoerde in {city}", "bei der fuer uns zustaendigen Datenschutzbehoerde"],
        ["einzulegen", "einzureichen", "zu erheben"],
        "{sig} {obj} {verb}",
    ),
}


def _compose_core(rng: np.random.Generator, right: str) -> str:
    sigs, objs, verbs, pattern = _CORE_PARTS[right]
    core = pattern.format(
        sig=sigs[int(rng.integers(len(sigs)))],
        obj=objs[int(rng.integers(len(objs)))],
        verb=verbs[int(rng.integers(len(verbs)))],
    )
    return " ".join(core.split())


_FILLER_TOPICS["rights_adjacent"] = (
    [frame.format(core=core) for frame in _FRAMES for core in _ADJACENT_CORES],
    1.6,
)

_TOPIC_NAMES = list(_FILLER_TOPICS)
_TOPIC_WEIGHTS = np.array([w for _, w in _FILLER_TOPICS.values()])
_TOPIC_WEIGHTS = _TOPIC_WEIGHTS / _TOPIC_WEIGHTS.sum()


def _doc_vocab(rng: np.random.Generator, doc_index: int) -> dict[str, str]:
    head = _COMPANY_HEADS[doc_index % len(_COMPANY_HEADS)]
    tail = _COMPANY_TAILS[int(rng.integers(len(_COMPANY_TAILS)))]
    company = f"{head} {tail}"
    return {
        "company": company,
        "email": f"datenschutz@{head.lower()}.de",
        "city": _CITIES[int(rng.integers(len(_CITIES)))],
        "tool": _TOOLS[int(rng.integers(len(_TOOLS)))],
        "provider": _PROVIDERS[int(rng.integers(len(_PROVIDERS)))],
        "days": _DAYS[int(rng.integers(len(_DAYS)))],
    }


def _fill(template: str, vocab: dict[str, str], rng: np.random.Generator) -> str:
    out = template
    for key, value in vocab.items():
        if "{" + key + "}" in out:
            # occasionally swap in a non-default slot value for variety
            if key in ("tool", "provider", "city", "days") and rng.random() < 0.3:
                pool = {
                    "tool": _TOOLS,
                    "provider": _PROVIDERS,
                    "city": _CITIES,
                    "days": _DAYS,
                }[key]
                value = pool[int(rng.integers(len(pool)))]
            out = out.replace("{" + key + "}", value)
    return out


def _filler_sentences(rng: np.random.Generator, vocab: dict[str, str], n: int) -> list[str]:
    # topic drawn per sentence: real policy paragraphs blend topics freely
    sentences: list[str] = []
    seen: set[str] = set()
    while len(sentences) < n:
        if rng.random() < 0.25:
            template = _LONG_FILLERS[int(rng.integers(len(_LONG_FILLERS)))]
        else:
            topic = _TOPIC_NAMES[int(rng.choice(len(_TOPIC_NAMES), p=_TOPIC_WEIGHTS))]
            pool = _FILLER_TOPICS[topic][0]
            template = pool[int(rng.integers(len(pool)))]
        if template in seen:
            continue
        seen.add(template)
        sentences.append(_fill(template, vocab, rng))
    return sentences


def _filler_paragraph(rng: np.random.Generator, vocab: dict[str, str]) -> str:
    if rng.random() < 0.05:
        return _HEADINGS[int(rng.integers(len(_HEADINGS)))]
    # 2-7 sentences, so filler paragraphs match positives in length
    return " ".join(_filler_sentences(rng, vocab, int(rng.integers(2, 8))))


def _positive_paragraph(
    rng: np.random.Generator, vocab: dict[str, str], right: str, core: str
) -> tuple[str, str]:
    """Returns (paragraph text, right-granting passage)."""
    frame = _FRAMES[int(rng.integers(len(_FRAMES)))]
    core = _fill(core, vocab, rng)
    passage = _fill(frame, vocab, rng).replace("{core}", core)
    sentences = [passage]
    tail = _TAILS[int(rng.integers(len(_TAILS)))]
    if tail and rng.random() < 0.5:
        sentences.append(_fill(tail, vocab, rng))
    # same sentence-count distribution as filler paragraphs (2-7)
    n = max(int(rng.integers(2, 8)), len(sentences))
    surround = _filler_sentences(rng, vocab, n - len(sentences))
    cut = int(rng.integers(len(surround) + 1))
    return " ".join(surround[:cut] + sentences + surround[cut:]), passage


def _blob_counts(rng: np.random.Generator) -> list[int]:
    counts = [int(c) for c in rng.integers(220, 336, size=N_DOCUMENTS)]
    i = 0
    while sum(counts) != TOTAL_BLOBS:
        step = 1 if sum(counts) < TOTAL_BLOBS else -1
        if counts[i % N_DOCUMENTS] + step > 40:
            counts[i % N_DOCUMENTS] += step
        i += 1
    return counts


def _extra_assignments(rng: np.random.Generator) -> dict[str, list[int]]:
    """Documents receiving a second positive for each right."""
    return {
        right: sorted(
            int(i)
            for i in rng.choice(
                N_DOCUMENTS, size=POSITIVE_COUNTS[right] - N_DOCUMENTS, replace=False
            )
        )
        for right in RIGHTS
    }


def generate_corpus_records(seed: int = 13) -> list[dict]:
    """All 60 policy records as Policy File Format dicts."""
    master = np.random.default_rng(seed)
    blob_counts = _blob_counts(master)
    extras = _extra_assignments(master)

    records = []
    for doc_index in range(N_DOCUMENTS):
        rng = np.random.default_rng([seed, doc_index])
        vocab = _doc_vocab(rng, doc_index)
        n_blobs = blob_counts[doc_index]

        positives: list[tuple[str, str]] = []  # (right, composed core phrase)
        for right in RIGHTS:
            positives.append((right, _compose_core(rng, right)))
            if doc_index in extras[right]:
                positives.append((right, _compose_core(rng, right)))

        positions = sorted(
            int(p) for p in rng.choice(n_blobs, size=len(positives), replace=False)
        )
        order = rng.permutation(len(positives))
        pos_at = {positions[j]: positives[int(order[j])] for j in range(len(positives))}

        blobs: list[str] = []
        annotations: list[dict] = []
        for i in range(n_blobs):
            if i in pos_at:
                right, core = pos_at[i]
                text, passage = _positive_paragraph(rng, vocab, right, core)
                annotations.append({"label": right, "passage": passage})
                blobs.append(text)
            else:
                blobs.append(_filler_paragraph(rng, vocab))

        records.append(
            {
                "id": f"policy_{doc_index:03d}",
                "title": f"Datenschutzerklaerung der {vocab['company']}",
                "language": "de",
                "text": "\n\n".join(blobs),
                "annotations": annotations,
            }
        )
    return records


def default_schema() -> dict:
    return {
        "id": "data_subject_rights",
        "name": "Data Subject Rights",
        "description": "Rights granted to data subjects under the GDPR",
        "children": [
            {
                "id": right,
                "name": RIGHT_NAMES[right],
                "description": GDPR_REFERENCES[right],
                "children": [],
            }
            for right in RIGHTS
        ],
    }


def make_dataset(out_dir: str | Path, seed: int = 13) -> Path:
    """Write the policy records and label schema to a directory."""
    out_dir = Path(out_dir)
    policies = out_dir / "policies"
    policies.mkdir(parents=True, exist_ok=True)
    for record in generate_corpus_records(seed):
        path = policies / f"{record['id']}.json"
        path.write_text(json.dumps(record, ensure_ascii=False, indent=1), encoding="utf-8")
    (out_dir / "schema.json").write_text(
        json.dumps(default_schema(), ensure_ascii=False, indent=1), encoding="utf-8"
    )
    return out_dir
